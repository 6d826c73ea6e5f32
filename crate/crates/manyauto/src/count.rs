//! Point counting for hyperelliptic curves over finite fields.
//!
//! Provides exact arithmetic in F_{p^k} with a deterministic choice of
//! modulus, point counting for y^2 = f(x) via quadratic-character sums
//! (with a precomputed square bitmap over the whole field), and
//! reconstruction of the characteristic polynomial of Frobenius from the
//! counts N_1..N_g using Newton's identities and the functional equation.

use crate::poly::{big, is_prime_u64, QPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

/// Counting beyond this field size is refused: the character-sum engine
/// is linear in q and anything past ~10^9 is out of scale for it.
pub const Q_LIMIT: u64 = 1_000_000_000;

#[derive(Debug, Error)]
pub enum CountError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("extension degree must be >= 1")]
    BadDegree,
    #[error("field size {0} exceeds the counting limit {Q_LIMIT}")]
    OutOfScale(u64),
    #[error("p = {0} is not a good prime for this curve")]
    BadPrime(u64),
    #[error("coefficient has denominator divisible by p = {0}")]
    BadDenominator(u64),
    #[error("need counts N_1..N_g, got {got} for genus {g}")]
    BadCounts { got: usize, g: usize },
    #[error("Weil bound violated at coefficient {0}: counting bug")]
    WeilViolation(usize),
    #[error("Newton identities produced a non-integer coefficient")]
    NonIntegral,
}

/// The finite field F_{p^k}, with the lexicographically smallest monic
/// irreducible modulus (ordered by the coefficient tuple (c_0,...,c_{k-1})).
/// Elements are coefficient vectors of length k over F_p.
#[derive(Debug, Clone)]
pub struct GFContext {
    p: u64,
    k: usize,
    q: u64,
    /// monic modulus, ascending coefficients, length k+1
    modulus: Vec<u64>,
    /// x^{k+i} reduced mod the modulus, for i = 0..k-1, each length k
    red_rows: Vec<Vec<u64>>,
    /// p^i for i = 0..k
    ppow: Vec<u64>,
}

impl GFContext {
    pub fn new(p: u64, k: usize) -> Result<GFContext, CountError> {
        if p == 2 || !is_prime_u64(p) {
            return Err(CountError::NotOddPrime(p));
        }
        if k == 0 {
            return Err(CountError::BadDegree);
        }
        let mut q: u64 = 1;
        for _ in 0..k {
            q = q.checked_mul(p).ok_or(CountError::OutOfScale(u64::MAX))?;
            if q > Q_LIMIT {
                return Err(CountError::OutOfScale(q));
            }
        }
        let modulus = smallest_irreducible(p, k);
        let mut red_rows = Vec::with_capacity(k.saturating_sub(1));
        // row_0 = x^k mod m = -(c_0..c_{k-1}); row_{i+1} = shift(row_i) reduced
        let mut row: Vec<u64> = modulus[..k].iter().map(|&c| (p - c % p) % p).collect();
        for _ in 0..k.saturating_sub(1) {
            red_rows.push(row.clone());
            // multiply by x: shift up, fold the overflow term via row_0
            let top = row[k - 1];
            for i in (1..k).rev() {
                row[i] = row[i - 1];
            }
            row[0] = 0;
            if top != 0 {
                for i in 0..k {
                    let sub = modulus[i] * top % p;
                    row[i] = (row[i] + p - sub) % p;
                }
            }
        }
        let ppow: Vec<u64> = (0..=k).map(|i| p.pow(i as u32)).collect();
        Ok(GFContext {
            p,
            k,
            q,
            modulus,
            red_rows,
            ppow,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Product of two field elements (length-k coefficient vectors).
    #[inline]
    fn mul(&self, a: &[u64], b: &[u64], wide: &mut [u64], out: &mut [u64]) {
        let k = self.k;
        if k == 1 {
            out[0] = a[0] * b[0] % self.p;
            return;
        }
        wide[..2 * k - 1].fill(0);
        for i in 0..k {
            if a[i] == 0 {
                continue;
            }
            for j in 0..k {
                // products < p^2 <= 151^2 and at most k <= 8 summands: no
                // overflow before the final reduction
                wide[i + j] += a[i] * b[j];
            }
        }
        for w in wide[..2 * k - 1].iter_mut() {
            *w %= self.p;
        }
        out[..k].copy_from_slice(&wide[..k]);
        for i in 0..k - 1 {
            let c = wide[k + i];
            if c == 0 {
                continue;
            }
            let row = &self.red_rows[i];
            for j in 0..k {
                out[j] = (out[j] + c * row[j]) % self.p;
            }
        }
    }

    /// The integer index of an element: sum of c_i * p^i.
    #[inline]
    fn index(&self, a: &[u64]) -> u64 {
        let mut idx = 0;
        for i in 0..self.k {
            idx += a[i] * self.ppow[i];
        }
        idx
    }

    fn digits(&self, mut idx: u64) -> Vec<u64> {
        let mut d = vec![0u64; self.k];
        for item in d.iter_mut() {
            *item = idx % self.p;
            idx /= self.p;
        }
        d
    }
}

/// Lexicographically smallest monic irreducible polynomial of degree k
/// over F_p, ordered by the coefficient tuple (c_0, ..., c_{k-1}).
fn smallest_irreducible(p: u64, k: usize) -> Vec<u64> {
    if k == 1 {
        return vec![0, 1]; // x itself
    }
    let total = p.pow(k as u32);
    for t in 0..total {
        let mut cand = vec![0u64; k + 1];
        cand[k] = 1;
        // c_0 is the most significant digit so the tuple order is lex
        let mut rest = t;
        for j in (0..k).rev() {
            cand[j] = rest % p;
            rest /= p;
        }
        if cand[0] == 0 {
            continue; // divisible by x
        }
        if rabin_irreducible(&cand, p) {
            return cand;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Rabin's irreducibility test for a monic polynomial over F_p.
fn rabin_irreducible(m: &[u64], p: u64) -> bool {
    let k = m.len() - 1;
    let x = vec![0u64, 1];
    // x^(p^k) == x mod m
    let mut fr = x.clone();
    for _ in 0..k {
        fr = crate::poly::modp_pow_mod(&fr, p, m, p);
    }
    if fr != vec![0, 1] {
        return false;
    }
    // for each prime r | k: gcd(x^(p^(k/r)) - x, m) must be constant
    let mut kk = k;
    let mut r = 2;
    while r * r <= kk {
        if kk % r == 0 {
            while kk % r == 0 {
                kk /= r;
            }
            if !rabin_subcheck(m, p, k / r) {
                return false;
            }
        }
        r += 1;
    }
    if kk > 1 && !rabin_subcheck(m, p, k / kk) {
        return false;
    }
    true
}

fn rabin_subcheck(m: &[u64], p: u64, e: usize) -> bool {
    let mut fr = vec![0u64, 1];
    for _ in 0..e {
        fr = crate::poly::modp_pow_mod(&fr, p, m, p);
    }
    // fr - x
    let mut diff = fr;
    if diff.len() < 2 {
        diff.resize(2, 0);
    }
    diff[1] = (diff[1] + p - 1) % p;
    let diff = crate::poly::modp_trim(diff);
    let g = crate::poly::modp_gcd(&diff, m, p);
    g.len() <= 1
}

/// Bitmap of the nonzero squares of F_q, indexed by element index.
struct SquareMap {
    words: Vec<u64>,
}

impl SquareMap {
    fn build(ctx: &GFContext) -> SquareMap {
        let q = ctx.q as usize;
        let mut words = vec![0u64; q.div_ceil(64)];
        let k = ctx.k;
        let mut x = vec![0u64; k];
        let mut wide = vec![0u64; 2 * k];
        let mut sq = vec![0u64; k];
        // enumerate x = 1..q-1 by odometer; (-x)^2 = x^2 so half would do,
        // but the index bookkeeping is simpler over the full range
        for _ in 1..ctx.q {
            // increment odometer
            for d in x.iter_mut() {
                *d += 1;
                if *d < ctx.p {
                    break;
                }
                *d = 0;
            }
            ctx.mul(&x, &x, &mut wide, &mut sq);
            let idx = ctx.index(&sq) as usize;
            words[idx / 64] |= 1 << (idx % 64);
        }
        SquareMap { words }
    }

    /// Quadratic character: +1 for nonzero squares, -1 for nonsquares,
    /// 0 for zero.
    #[inline]
    fn chi(&self, idx: u64) -> i64 {
        if idx == 0 {
            return 0;
        }
        if self.words[(idx / 64) as usize] >> (idx % 64) & 1 == 1 {
            1
        } else {
            -1
        }
    }
}

/// Whether p is a good prime for y^2 = f(x): odd and not dividing
/// lc(f) * disc(f).
pub fn good_prime(f: &QPoly, p: u64) -> bool {
    if p == 2 || !is_prime_u64(p) {
        return false;
    }
    let ints = f.primitive_int();
    if ints.len() < 2 {
        return false;
    }
    let pp = BigInt::from(p);
    if (ints.last().unwrap() % &pp).is_zero() {
        return false;
    }
    let fi = QPoly::from_coeffs(ints.into_iter().map(BigRational::from).collect());
    let disc = match fi.discriminant() {
        Ok(d) => d,
        Err(_) => return false,
    };
    if disc.is_zero() {
        return false;
    }
    !(disc.numer() % &pp).is_zero()
}

/// Reduce a rational coefficient mod p (denominator must be prime to p).
fn rat_mod_p(c: &BigRational, p: u64) -> Result<u64, CountError> {
    let pp = BigInt::from(p);
    let num = ((c.numer() % &pp) + &pp) % &pp;
    let den = ((c.denom() % &pp) + &pp) % &pp;
    let den = den.to_u64().unwrap();
    if den == 0 {
        return Err(CountError::BadDenominator(p));
    }
    let inv = crate::poly::pow_mod(den, p - 2, p);
    Ok(num.to_u64().unwrap() * inv % p)
}

/// Number of points of the smooth projective model of y^2 = f(x) over the
/// field of ctx, by quadratic-character summation.
pub fn count_points(f: &QPoly, ctx: &GFContext) -> Result<u64, CountError> {
    if !good_prime(f, ctx.p) {
        return Err(CountError::BadPrime(ctx.p));
    }
    let deg = f.degree().expect("separable poly is nonzero");
    let coeffs: Vec<u64> = f
        .coeffs()
        .iter()
        .map(|c| rat_mod_p(c, ctx.p))
        .collect::<Result<_, _>>()?;
    let sq = SquareMap::build(ctx);

    // affine points: sum over x of (1 + chi(f(x)))
    let chunk: u64 = 1 << 20;
    let n_chunks = ctx.q.div_ceil(chunk);
    let signed: i64 = (0..n_chunks)
        .into_par_iter()
        .map(|ci| {
            let start = ci * chunk;
            let end = (start + chunk).min(ctx.q);
            let k = ctx.k;
            let mut x = ctx.digits(start);
            let mut wide = vec![0u64; 2 * k];
            let mut acc = vec![0u64; k];
            let mut tmp = vec![0u64; k];
            let mut sum: i64 = 0;
            for _ in start..end {
                // Horner with scalar coefficients
                acc.fill(0);
                acc[0] = coeffs[deg];
                for j in (0..deg).rev() {
                    ctx.mul(&acc, &x, &mut wide, &mut tmp);
                    acc.copy_from_slice(&tmp);
                    acc[0] = (acc[0] + coeffs[j]) % ctx.p;
                }
                sum += 1 + sq.chi(ctx.index(&acc));
                // increment odometer
                for d in x.iter_mut() {
                    *d += 1;
                    if *d < ctx.p {
                        break;
                    }
                    *d = 0;
                }
            }
            sum
        })
        .sum();

    let infinity: i64 = if deg % 2 == 1 {
        1
    } else {
        1 + sq.chi(ctx.index(&{
            let mut lc = vec![0u64; ctx.k];
            lc[0] = coeffs[deg];
            lc
        }))
    };
    Ok((signed + infinity) as u64)
}

/// Brute-force oracle: enumerate all (x, y) pairs.  Only for small fields.
pub fn count_points_naive(f: &QPoly, ctx: &GFContext) -> Result<u64, CountError> {
    if !good_prime(f, ctx.p) {
        return Err(CountError::BadPrime(ctx.p));
    }
    let deg = f.degree().expect("nonzero");
    let coeffs: Vec<u64> = f
        .coeffs()
        .iter()
        .map(|c| rat_mod_p(c, ctx.p))
        .collect::<Result<_, _>>()?;
    let k = ctx.k;
    let mut wide = vec![0u64; 2 * k];
    let mut tmp = vec![0u64; k];
    // table of all squares with multiplicity: sq_count[idx] = #{y : y^2 = elt}
    let mut sq_count = vec![0u32; ctx.q as usize];
    let mut y = vec![0u64; k];
    let mut s = vec![0u64; k];
    for _ in 0..ctx.q {
        ctx.mul(&y, &y, &mut wide, &mut s);
        sq_count[ctx.index(&s) as usize] += 1;
        for d in y.iter_mut() {
            *d += 1;
            if *d < ctx.p {
                break;
            }
            *d = 0;
        }
    }
    let mut total: u64 = 0;
    let mut x = vec![0u64; k];
    let mut acc = vec![0u64; k];
    for _ in 0..ctx.q {
        acc.fill(0);
        acc[0] = coeffs[deg];
        for j in (0..deg).rev() {
            ctx.mul(&acc, &x, &mut wide, &mut tmp);
            acc.copy_from_slice(&tmp);
            acc[0] = (acc[0] + coeffs[j]) % ctx.p;
        }
        total += u64::from(sq_count[ctx.index(&acc) as usize]);
        for d in x.iter_mut() {
            *d += 1;
            if *d < ctx.p {
                break;
            }
            *d = 0;
        }
    }
    total += if deg % 2 == 1 {
        1
    } else {
        let mut lc = vec![0u64; k];
        lc[0] = coeffs[deg];
        u64::from(sq_count[ctx.index(&lc) as usize])
    };
    Ok(total)
}

/// Characteristic polynomial of Frobenius g_p of degree 2g from the counts
/// N_1..N_g over F_p, F_{p^2}, ..., F_{p^g}.
pub fn lpoly_from_counts(counts: &[u64], p: u64, g: usize) -> Result<QPoly, CountError> {
    if counts.len() != g || g == 0 {
        return Err(CountError::BadCounts {
            got: counts.len(),
            g,
        });
    }
    // power sums of the Frobenius eigenvalues
    let pp = BigInt::from(p);
    let powers: Vec<BigInt> = (1..=g).map(|i| pp.pow(i as u32)).collect();
    let psums: Vec<BigInt> = (0..g)
        .map(|i| &powers[i] + 1 - BigInt::from(counts[i]))
        .collect();
    // Newton's identities: i*e_i = sum_{j=1}^{i} (-1)^{j-1} e_{i-j} P_j
    let mut e: Vec<BigRational> = vec![BigRational::one()];
    for i in 1..=g {
        let mut s = BigRational::zero();
        for j in 1..=i {
            let term = &e[i - j] * BigRational::from(psums[j - 1].clone());
            if j % 2 == 1 {
                s += term;
            } else {
                s -= term;
            }
        }
        e.push(s / big(i as i64));
    }
    let mut a: Vec<BigInt> = Vec::with_capacity(2 * g + 1);
    for (i, ei) in e.iter().enumerate() {
        if !ei.denom().is_one() {
            return Err(CountError::NonIntegral);
        }
        let v = ei.numer().clone();
        a.push(if i % 2 == 1 { -v } else { v });
    }
    // functional equation a_{2g-i} = p^{g-i} a_i completes the polynomial
    for i in (0..g).rev() {
        let v = pp.pow((g - i) as u32) * &a[i];
        a.push(v);
    }
    debug_assert_eq!(a.len(), 2 * g + 1);
    // Weil bounds: a_i^2 <= C(2g, i)^2 p^i
    for (i, ai) in a.iter().enumerate() {
        let c = binomial(2 * g, i);
        if ai * ai > &c * &c * pp.pow(i as u32) {
            return Err(CountError::WeilViolation(i));
        }
    }
    // coefficient of T^{2g-i} is a_i
    let coeffs: Vec<BigRational> = (0..=2 * g)
        .map(|j| BigRational::from(a[2 * g - j].clone()))
        .collect();
    Ok(QPoly::from_coeffs(coeffs))
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k.min(n - k) {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Recompute N_k from the characteristic polynomial via power sums of its
/// roots (Newton's identities run forward).  Used as a consistency check.
pub fn counts_from_lpoly(gp: &QPoly, p: u64, up_to: usize) -> Vec<BigInt> {
    let d = gp.degree().expect("nonzero");
    // gp = T^d + a_1 T^{d-1} + ...; e_i = (-1)^i a_i
    let e: Vec<BigInt> = (0..=d)
        .map(|i| {
            let a = gp.coeff(d - i).numer().clone();
            if i % 2 == 1 {
                -a
            } else {
                a
            }
        })
        .collect();
    let mut psums: Vec<BigInt> = Vec::with_capacity(up_to + 1);
    psums.push(BigInt::from(d));
    for i in 1..=up_to {
        // P_i = e_1 P_{i-1} - e_2 P_{i-2} + ... + (-1)^{i-1} i e_i
        let mut s = BigInt::zero();
        for j in 1..=i.min(d) {
            let term = if j == i {
                BigInt::from(i) * &e[j]
            } else {
                &e[j] * &psums[i - j]
            };
            if j % 2 == 1 {
                s += term;
            } else {
                s -= term;
            }
        }
        psums.push(s);
    }
    let pp = BigInt::from(p);
    (1..=up_to)
        .map(|i| pp.pow(i as u32) + 1 - &psums[i])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_construction() {
        let ctx = GFContext::new(3, 2).unwrap();
        assert_eq!(ctx.q(), 9);
        // lex-smallest irreducible over F_3 with c_0 ascending: x^2 + 1
        assert_eq!(ctx.modulus(), &[1, 0, 1]);
        assert!(GFContext::new(2, 3).is_err());
        assert!(GFContext::new(9, 1).is_err());
        assert!(GFContext::new(31, 7).is_err()); // 31^7 too large
        let f5 = GFContext::new(5, 1).unwrap();
        assert_eq!(f5.q(), 5);
    }

    #[test]
    fn field_multiplication_matches_orders() {
        // every nonzero element of F_{p^k} has order dividing q - 1
        for (p, k) in [(3u64, 3usize), (5, 2), (7, 2)] {
            let ctx = GFContext::new(p, k).unwrap();
            let mut wide = vec![0u64; 2 * k];
            let mut out = vec![0u64; k];
            for idx in 1..ctx.q() {
                let x = ctx.digits(idx);
                // x^(q-1) by square-and-multiply
                let mut acc = vec![0u64; k];
                acc[0] = 1;
                let mut b = x.clone();
                let mut e = ctx.q() - 1;
                while e > 0 {
                    if e & 1 == 1 {
                        ctx.mul(&acc.clone(), &b, &mut wide, &mut out);
                        acc.copy_from_slice(&out);
                    }
                    ctx.mul(&b.clone(), &b, &mut wide, &mut out);
                    b.copy_from_slice(&out);
                    e >>= 1;
                }
                assert_eq!(ctx.index(&acc), 1, "p={p} k={k} idx={idx}");
            }
        }
    }

    #[test]
    fn good_prime_examples() {
        let f = QPoly::from_ints(&[0, -1, 0, 0, 0, 1]); // x^5 - x
        assert!(!good_prime(&f, 2));
        assert!(good_prime(&f, 5));
        assert!(!good_prime(&f, 4)); // not prime
        let g = QPoly::from_ints(&[1, 0, 0, 1]); // x^3 + 1, disc = -27
        assert!(!good_prime(&g, 3));
        assert!(good_prime(&g, 5));
    }

    #[test]
    fn count_examples() {
        let f = QPoly::from_ints(&[0, 1, 0, 1]); // x^3 + x
        let f3 = GFContext::new(3, 1).unwrap();
        assert_eq!(count_points(&f, &f3).unwrap(), 4);
        let f9 = GFContext::new(3, 2).unwrap();
        assert_eq!(count_points(&f, &f9).unwrap(), 16);
        let f5 = GFContext::new(5, 1).unwrap();
        assert_eq!(count_points(&f, &f5).unwrap(), 4);
        // even degree: y^2 = x^6 + 1 over F_5 has two points at infinity
        let h = QPoly::from_ints(&[1, 0, 0, 0, 0, 0, 1]);
        let n = count_points(&h, &f5).unwrap();
        let naive = count_points_naive(&h, &f5).unwrap();
        assert_eq!(n, naive);
    }

    #[test]
    fn count_matches_naive_randomized() {
        // deterministic LCG over random-ish curves, all q <= 343
        let mut state: u64 = 0x9e3779b97f4a7c15;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            state >> 33
        };
        let ctxs = [
            GFContext::new(3, 1).unwrap(),
            GFContext::new(5, 1).unwrap(),
            GFContext::new(7, 1).unwrap(),
            GFContext::new(3, 2).unwrap(),
            GFContext::new(11, 1).unwrap(),
            GFContext::new(5, 2).unwrap(),
            GFContext::new(7, 3).unwrap(),
            GFContext::new(3, 5).unwrap(),
        ];
        let mut tested = 0;
        while tested < 25 {
            let ctx = &ctxs[(next() % 8) as usize];
            let deg = 3 + (next() % 6) as usize; // genus up to 3
            let mut coeffs: Vec<i64> = (0..=deg).map(|_| (next() % 19) as i64 - 9).collect();
            if coeffs[deg] == 0 {
                coeffs[deg] = 1;
            }
            let f = QPoly::from_ints(&coeffs);
            if !good_prime(&f, ctx.p()) {
                continue;
            }
            assert_eq!(
                count_points(&f, ctx).unwrap(),
                count_points_naive(&f, ctx).unwrap(),
                "f = {coeffs:?} over F_{}", ctx.q()
            );
            tested += 1;
        }
    }

    #[test]
    fn lpoly_examples() {
        // g=1, p=3, N=4 -> T^2 + 3
        let gp = lpoly_from_counts(&[4], 3, 1).unwrap();
        assert_eq!(gp, QPoly::from_ints(&[3, 0, 1]));
        // g=1, p=5, N=4: Frobenius trace 2, so T^2 - 2T + 5
        let gp = lpoly_from_counts(&[4], 5, 1).unwrap();
        assert_eq!(gp, QPoly::from_ints(&[5, -2, 1]));
        // g=2, zero power sums -> odd coefficients vanish
        let p = 7u64;
        let gp = lpoly_from_counts(&[8, 50], p, 2).unwrap();
        assert!(gp.coeff(3).is_zero());
        assert!(gp.coeff(1).is_zero());
    }

    #[test]
    fn lpoly_roundtrip_with_counts() {
        // y^2 = x^5 + 3x + 1 over F_7: reconstruct g_p from N_1, N_2 and
        // check it predicts N_3 (enumeration over F_343)
        let f = QPoly::from_ints(&[1, 3, 0, 0, 0, 1]);
        assert!(good_prime(&f, 7));
        let n1 = count_points(&f, &GFContext::new(7, 1).unwrap()).unwrap();
        let n2 = count_points(&f, &GFContext::new(7, 2).unwrap()).unwrap();
        let n3 = count_points(&f, &GFContext::new(7, 3).unwrap()).unwrap();
        let gp = lpoly_from_counts(&[n1, n2], 7, 2).unwrap();
        let back = counts_from_lpoly(&gp, 7, 3);
        assert_eq!(back[0], BigInt::from(n1));
        assert_eq!(back[1], BigInt::from(n2));
        assert_eq!(back[2], BigInt::from(n3));
        // functional equation a_{2g-i} = p^{g-i} a_i
        for i in 0..2 {
            assert_eq!(
                gp.coeff(4 - i).numer() * BigInt::from(7).pow(2 - i as u32),
                gp.coeff(i).numer().clone()
            );
        }
    }

    #[test]
    fn weil_violation_rejected() {
        assert!(matches!(
            lpoly_from_counts(&[100], 3, 1),
            Err(CountError::WeilViolation(_))
        ));
    }
}
