//! Arithmetic in F_q for prime powers q, the trace sets U_q, and point counts
//! on the auxiliary affine curves behind the sumset and ramification lemmas.
//!
//! Fields are represented as F_p[x] modulo a fixed irreducible polynomial.
//! The modulus is pinned to the lexicographically smallest monic irreducible
//! of its degree (coefficients compared low-degree-first), so every context,
//! element order, and downstream certificate is reproducible.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exact_arith::{legendre, smallest_nonresidue, sqrt_mod};

/// Hard cap on q = p^k unless a caller supplies its own bound.
pub const DEFAULT_FIELD_BOUND: u64 = 1 << 16;

/// The field F_q, q = p^k, as F_p[x] mod a pinned irreducible polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqContext {
    p: u64,
    k: u32,
    q: u64,
    /// Coefficients by ascending degree, length k+1, leading coefficient 1.
    modulus: Vec<u64>,
}

/// An element of some F_q: its coefficient vector of length k, reduced mod p.
///
/// Ordering compares high-degree coefficients first, which equals ordering by
/// the index sum(c_i p^i); iteration and sorted sets use that canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqElem {
    coeffs: Vec<u64>,
}

impl FqElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl PartialOrd for FqElem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FqElem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs.iter().rev().cmp(other.coeffs.iter().rev())
    }
}

/// Builds F_{p^k} under the default bound.
pub fn fq_context(p: u64, k: u32) -> Result<FqContext> {
    fq_context_with_bound(p, k, DEFAULT_FIELD_BOUND)
}

/// Builds F_{p^k}, rejecting p^k > bound with [`Error::BoundExceeded`].
pub fn fq_context_with_bound(p: u64, k: u32, bound: u64) -> Result<FqContext> {
    if !crate::exact_arith::is_prime_u64(p) {
        return Err(Error::PreconditionViolation(format!("{p} is not prime")));
    }
    if k == 0 {
        return Err(Error::PreconditionViolation("exponent k = 0".into()));
    }
    let mut q = 1u64;
    for _ in 0..k {
        q = q
            .checked_mul(p)
            .filter(|&q| q <= bound)
            .ok_or_else(|| Error::BoundExceeded(format!("{p}^{k} exceeds bound {bound}")))?;
    }
    let modulus = smallest_irreducible(p, k);
    Ok(FqContext { p, k, q, modulus })
}

/// The lexicographically smallest monic irreducible of degree k over F_p,
/// comparing coefficient tuples (c_0, ..., c_{k-1}) low-degree-first.
fn smallest_irreducible(p: u64, k: u32) -> Vec<u64> {
    if k == 1 {
        // x itself: the smallest tuple is (c_0) = (0).
        return vec![0, 1];
    }
    let mut counter = 0u64;
    loop {
        // Digit i of the counter (most significant first) is c_i, so counting
        // up walks the tuples in the pinned lexicographic order.
        let mut coeffs = vec![0u64; k as usize + 1];
        coeffs[k as usize] = 1;
        let mut m = counter;
        for i in (0..k as usize).rev() {
            coeffs[i] = m % p;
            m /= p;
        }
        if poly_is_irreducible(&coeffs, p) {
            return coeffs;
        }
        counter += 1;
        assert!(
            counter < p.pow(k),
            "an irreducible of degree {k} over F_{p} exists"
        );
    }
}

/// Irreducibility over F_p by trial division: a reducible polynomial of
/// degree k has a monic factor of degree between 1 and k/2.
fn poly_is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    for d in 1..=(k / 2) {
        let mut counter = 0u64;
        let total = p.pow(d as u32);
        while counter < total {
            let mut g = vec![0u64; d + 1];
            g[d] = 1;
            let mut m = counter;
            for c in g.iter_mut().take(d) {
                *c = m % p;
                m /= p;
            }
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
            counter += 1;
        }
    }
    true
}

/// Remainder of f mod g over F_p; g monic. Empty vector means zero.
fn poly_rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let dg = g.len() - 1;
    debug_assert_eq!(g[dg], 1, "divisor must be monic");
    let mut r: Vec<u64> = f.to_vec();
    while r.len() > dg {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        if lead != 0 {
            for (i, &gc) in g.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - lead * gc % p) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

impl FqContext {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// The field size q = p^k.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients by ascending degree (length k+1, monic).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FqElem {
        FqElem {
            coeffs: vec![0; self.k as usize],
        }
    }

    pub fn one(&self) -> FqElem {
        self.scalar(1)
    }

    /// The constant-polynomial embedding of an integer residue.
    pub fn scalar(&self, c: u64) -> FqElem {
        let mut coeffs = vec![0; self.k as usize];
        coeffs[0] = c % self.p;
        FqElem { coeffs }
    }

    /// Element with index i = sum(c_j p^j), 0 <= i < q.
    pub fn elem_from_index(&self, i: u64) -> FqElem {
        debug_assert!(i < self.q);
        let mut coeffs = vec![0; self.k as usize];
        let mut m = i;
        for c in coeffs.iter_mut() {
            *c = m % self.p;
            m /= self.p;
        }
        FqElem { coeffs }
    }

    pub fn index_of(&self, x: &FqElem) -> u64 {
        x.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.p + c)
    }

    /// All q elements in canonical (index) order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q).map(|i| self.elem_from_index(i))
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        FqElem { coeffs }
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + self.p - y) % self.p)
            .collect();
        FqElem { coeffs }
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let mut rem = poly_rem(&prod, &self.modulus, self.p);
        rem.resize(k, 0);
        FqElem { coeffs: rem }
    }

    pub fn pow(&self, a: &FqElem, mut e: u64) -> FqElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, via a^(q-2). Panics on zero.
    pub fn inv(&self, a: &FqElem) -> FqElem {
        assert!(!a.is_zero(), "inverse of zero");
        self.pow(a, self.q - 2)
    }
}

/// U_q: the elements s for which x^2 - sx + 1 is irreducible over F_q.
///
/// Irreducibility is decided by exhaustive root search plus the
/// square-of-a-linear-factor check, uniformly in odd and even characteristic.
pub fn compute_uq(ctx: &FqContext) -> Vec<FqElem> {
    ctx.elements()
        .filter(|s| {
            let has_root = ctx.elements().any(|x| {
                let fx = ctx.add(
                    &ctx.sub(&ctx.mul(&x, &x), &ctx.mul(s, &x)),
                    &ctx.one(),
                );
                fx.is_zero()
            });
            if has_root {
                return false;
            }
            // (x - r)^2 = x^2 - 2rx + r^2: matching s = 2r, r^2 = 1 would be a
            // square of a linear factor (always also caught by the root scan).
            let is_square_of_linear = ctx.elements().any(|r| {
                let two_r = ctx.add(&r, &r);
                two_r == *s && ctx.mul(&r, &r) == ctx.one()
            });
            !is_square_of_linear
        })
        .collect()
}

/// Whether U_q + U_q = F_q, by exhaustion.
pub fn sumset_covers(ctx: &FqContext) -> bool {
    let uq = compute_uq(ctx);
    let mut sums = BTreeSet::new();
    for u in &uq {
        for v in &uq {
            sums.insert(ctx.index_of(&ctx.add(u, v)));
        }
    }
    sums.len() as u64 == ctx.q()
}

/// Exact affine point count of the genus-one curve X that witnesses
/// a in U_q + U_q for a != 0.
///
/// Odd q: x1^2 - c y1^2 = 1, x2^2 - c y2^2 = 1, 2x1 + 2x2 = a, y1 y2 != 0,
/// with c the smallest nonsquare. Even q: x1^2 + x1 y1 + c y1^2 = 1,
/// x2^2 + x2 y2 + c y2^2 = 1, y1 + y2 = a, y1 y2 != 0, with c the smallest
/// constant making x^2 + x + c irreducible. Brute force, O(q^2).
pub fn count_norm_trace_curve(ctx: &FqContext, a: &FqElem) -> u64 {
    assert!(!a.is_zero(), "the sumset curve is only defined for a != 0");
    let q = ctx.q() as usize;
    if ctx.p() != 2 {
        let c = smallest_nonsquare(ctx);
        // n[x] = #{y != 0 : x^2 - c y^2 = 1}; the linear relation fixes
        // x2 = a/2 - x1, so the count is a convolution of n with itself.
        let mut n = vec![0u64; q];
        for x in ctx.elements() {
            let lhs_base = ctx.mul(&x, &x);
            let count = ctx
                .elements()
                .filter(|y| {
                    !y.is_zero()
                        && ctx.sub(&lhs_base, &ctx.mul(&c, &ctx.mul(y, y))) == ctx.one()
                })
                .count();
            n[ctx.index_of(&x) as usize] = count as u64;
        }
        let half = ctx.inv(&ctx.scalar(2));
        let a_half = ctx.mul(a, &half);
        ctx.elements()
            .map(|x1| {
                let x2 = ctx.sub(&a_half, &x1);
                n[ctx.index_of(&x1) as usize] * n[ctx.index_of(&x2) as usize]
            })
            .sum()
    } else {
        let c = smallest_artin_schreier(ctx);
        // m[y] = #{x : x^2 + xy + c y^2 = 1} for y != 0 (zero at y = 0), and
        // the linear relation fixes y2 = a - y1.
        let mut m = vec![0u64; q];
        for y in ctx.elements() {
            if y.is_zero() {
                continue;
            }
            let cyy = ctx.mul(&c, &ctx.mul(&y, &y));
            let count = ctx
                .elements()
                .filter(|x| {
                    ctx.add(&ctx.add(&ctx.mul(x, x), &ctx.mul(x, &y)), &cyy) == ctx.one()
                })
                .count();
            m[ctx.index_of(&y) as usize] = count as u64;
        }
        ctx.elements()
            .map(|y1| {
                let y2 = ctx.sub(a, &y1);
                m[ctx.index_of(&y1) as usize] * m[ctx.index_of(&y2) as usize]
            })
            .sum()
    }
}

/// Smallest (by canonical order) nonsquare of an odd-characteristic field.
fn smallest_nonsquare(ctx: &FqContext) -> FqElem {
    debug_assert!(ctx.p() != 2);
    let squares: BTreeSet<FqElem> = ctx.elements().map(|x| ctx.mul(&x, &x)).collect();
    ctx.elements()
        .find(|x| !squares.contains(x))
        .expect("odd q has nonsquares")
}

/// Smallest c with x^2 + x + c irreducible over an even-characteristic field.
fn smallest_artin_schreier(ctx: &FqContext) -> FqElem {
    debug_assert!(ctx.p() == 2);
    ctx.elements()
        .find(|c| {
            !ctx.elements()
                .any(|x| ctx.add(&ctx.add(&ctx.mul(&x, &x), &x), c).is_zero())
        })
        .expect("x^2 + x + c is irreducible for half the constants c")
}

/// Complete list of F_p-points with x0 != 0 on c^2 x^4 + y^2 + 1 = 0,
/// sorted by (x0, y0). Nonempty for every prime p >= 11 (Hasse bound).
pub fn count_quartic_curve(p: u64, c: u64) -> Result<Vec<(u64, u64)>> {
    if p < 11 || !crate::exact_arith::is_prime_u64(p) {
        return Err(Error::PreconditionViolation(format!(
            "count_quartic_curve needs a prime p >= 11, got {p}"
        )));
    }
    if legendre(c % p, p) != -1 {
        return Err(Error::PreconditionViolation(format!(
            "{c} is not a quadratic nonresidue mod {p}"
        )));
    }
    let c = c % p;
    let mut points = Vec::new();
    for x0 in 1..p {
        let x0sq = x0 * x0 % p;
        let cx2 = c * x0sq % p;
        let rhs = (p - cx2 * cx2 % p + p - 1) % p;
        if let Some(y) = sqrt_mod(rhs, p) {
            points.push((x0, y));
            let other = (p - y) % p;
            if other != y {
                points.push((x0, other));
            }
        }
    }
    points.sort_unstable();
    Ok(points)
}

/// Smallest positive quadratic nonresidue mod an odd prime.
pub fn find_nonresidue(p: u64) -> Result<u64> {
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if !crate::exact_arith::is_prime_u64(p) {
        return Err(Error::PreconditionViolation(format!("{p} is not prime")));
    }
    Ok(smallest_nonresidue(p))
}

/// All (p, k) with p prime, k >= 1, p^k <= n, ordered by the value p^k.
pub fn prime_powers_up_to(n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in crate::exact_arith::primes_up_to(n) {
        let mut q = p;
        let mut k = 1u32;
        while q <= n {
            out.push((p, k, q));
            match q.checked_mul(p) {
                Some(next) => q = next,
                None => break,
            }
            k += 1;
        }
    }
    out.sort_by_key(|&(_, _, q)| q);
    out.into_iter().map(|(p, k, _)| (p, k)).collect()
}
