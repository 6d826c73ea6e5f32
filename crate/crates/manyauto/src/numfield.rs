//! Exact arithmetic in small number fields Q[x]/(m).
//!
//! Covers the cyclotomic coefficient fields used by the curve catalog
//! (up to Q(zeta_120), plus per-family cyclotomic contexts) and quadratic
//! fields.  Elements are coordinate vectors over Q reduced modulo the
//! defining polynomial.  Also provides minimal polynomials,
//! algebraic-integer tests, roots of unity, square roots of the rational
//! constants that appear in the catalog (via Gauss sums), and recognition
//! of elements lying in Q or in a quadratic subfield.

use crate::poly::{big, resultant_elim, BiPoly, Irreducibility, PolyError, QPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumFieldError {
    #[error("modulus must be monic of degree >= 1")]
    BadModulus,
    #[error("modulus could not be certified irreducible")]
    NotIrreducible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different field contexts")]
    CtxMismatch,
    #[error("no square root in this field: {0}")]
    NoSquareRoot(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A number field Q[x]/(m) with m monic irreducible.
pub struct NumberFieldCtx {
    modulus: QPoly,
    /// For cyclotomic contexts, the root-of-unity order of the generator.
    cyclotomic_order: Option<usize>,
}

impl fmt::Debug for NumberFieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cyclotomic_order {
            Some(n) => write!(f, "Q(zeta_{n})"),
            None => write!(f, "Q[x]/({:?})", self.modulus),
        }
    }
}

impl PartialEq for NumberFieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus
    }
}

pub type Ctx = Arc<NumberFieldCtx>;

impl NumberFieldCtx {
    /// General constructor; certifies irreducibility with the modular
    /// sieve and fails when that is inconclusive.
    pub fn new(modulus: QPoly) -> Result<Ctx, NumFieldError> {
        let d = modulus.degree().ok_or(NumFieldError::BadModulus)?;
        if d == 0 || !modulus.leading().is_one() {
            return Err(NumFieldError::BadModulus);
        }
        if modulus.irreducible_over_q(25)? != Irreducibility::Irreducible {
            return Err(NumFieldError::NotIrreducible);
        }
        Ok(Arc::new(NumberFieldCtx {
            modulus,
            cyclotomic_order: None,
        }))
    }

    /// The cyclotomic field Q(zeta_n).  Irreducibility of the cyclotomic
    /// polynomial is a theorem, so no sieve is run (the sieve cannot
    /// certify abelian fields anyway).
    pub fn cyclotomic(n: usize) -> Ctx {
        let modulus = QPoly::cyclotomic(n).expect("n >= 1");
        Arc::new(NumberFieldCtx {
            modulus,
            cyclotomic_order: Some(n),
        })
    }

    /// The master coefficient field for the fixed catalog curves.
    pub fn master() -> Ctx {
        NumberFieldCtx::cyclotomic(120)
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    pub fn modulus(&self) -> &QPoly {
        &self.modulus
    }

    pub fn cyclotomic_order(&self) -> Option<usize> {
        self.cyclotomic_order
    }
}

/// Element of a number field: coordinates in the power basis, reduced.
#[derive(Clone)]
pub struct NFElem {
    ctx: Ctx,
    coords: Vec<BigRational>,
}

impl fmt::Debug for NFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_poly())
    }
}

impl PartialEq for NFElem {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.modulus == other.ctx.modulus && self.coords == other.coords
    }
}

impl NFElem {
    pub fn new(ctx: &Ctx, poly: QPoly) -> NFElem {
        let red = poly.divrem(ctx.modulus()).1;
        let d = ctx.degree();
        let mut coords = red.coeffs().to_vec();
        coords.resize(d, BigRational::zero());
        NFElem {
            ctx: ctx.clone(),
            coords,
        }
    }

    pub fn zero(ctx: &Ctx) -> NFElem {
        NFElem::new(ctx, QPoly::zero())
    }

    pub fn one(ctx: &Ctx) -> NFElem {
        NFElem::new(ctx, QPoly::one())
    }

    pub fn from_rational(ctx: &Ctx, r: BigRational) -> NFElem {
        NFElem::new(ctx, QPoly::constant(r))
    }

    pub fn from_int(ctx: &Ctx, n: i64) -> NFElem {
        NFElem::from_rational(ctx, big(n))
    }

    /// The residue class of x (for cyclotomic contexts: zeta_n).
    pub fn gen(ctx: &Ctx) -> NFElem {
        NFElem::new(ctx, QPoly::monomial(1))
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn as_poly(&self) -> QPoly {
        QPoly::from_coeffs(self.coords.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map(|r| r.is_one()).unwrap_or(false)
    }

    pub fn add(&self, other: &NFElem) -> NFElem {
        self.check(other);
        NFElem::new(&self.ctx, self.as_poly() + other.as_poly())
    }

    pub fn sub(&self, other: &NFElem) -> NFElem {
        self.check(other);
        NFElem::new(&self.ctx, self.as_poly() - other.as_poly())
    }

    pub fn neg(&self) -> NFElem {
        NFElem::new(&self.ctx, -self.as_poly())
    }

    pub fn mul(&self, other: &NFElem) -> NFElem {
        self.check(other);
        NFElem::new(&self.ctx, &self.as_poly() * &other.as_poly())
    }

    pub fn scale(&self, r: &BigRational) -> NFElem {
        NFElem::new(&self.ctx, self.as_poly().scale(r))
    }

    pub fn div(&self, other: &NFElem) -> Result<NFElem, NumFieldError> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn inverse(&self) -> Result<NFElem, NumFieldError> {
        if self.is_zero() {
            return Err(NumFieldError::DivisionByZero);
        }
        // extended euclid: u*self + v*modulus = gcd = const
        let (g, u) = half_ext_gcd(&self.as_poly(), self.ctx.modulus());
        debug_assert_eq!(g.degree(), Some(0));
        Ok(NFElem::new(&self.ctx, u.scale(&g.leading().recip())))
    }

    pub fn pow(&self, e: u64) -> NFElem {
        let mut acc = NFElem::one(&self.ctx);
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    fn check(&self, other: &NFElem) {
        assert!(
            self.ctx.modulus == other.ctx.modulus,
            "number field context mismatch"
        );
    }

    /// Monic minimal polynomial over Q.
    pub fn minimal_polynomial(&self) -> QPoly {
        // Res_y(m(y), T - e(y)) = prod over conjugates (T - e(beta)),
        // a power of the minimal polynomial; squarefree part extracts it.
        let ep = self.as_poly();
        let mut y_coeffs: Vec<QPoly> = ep.coeffs().iter().map(|c| QPoly::constant(-c)).collect();
        if y_coeffs.is_empty() {
            y_coeffs.push(QPoly::zero());
        }
        y_coeffs[0] = &y_coeffs[0] + &QPoly::monomial(1);
        let bi = BiPoly::new(y_coeffs);
        let res = resultant_elim(self.ctx.modulus(), &bi).expect("modulus nonzero");
        res.squarefree_part().expect("resultant nonzero").monic()
    }

    pub fn is_algebraic_integer(&self) -> bool {
        self.minimal_polynomial()
            .coeffs()
            .iter()
            .all(|c| c.denom().is_one())
    }

    /// The rational value, when the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// Galois conjugate x -> x^k for cyclotomic contexts with gcd(k, n)=1.
    pub fn galois_map(&self, k: usize) -> NFElem {
        let n = self
            .ctx
            .cyclotomic_order
            .expect("galois_map requires a cyclotomic context");
        assert_eq!(num_integer::gcd(k, n), 1, "k must be prime to n");
        let zk = NFElem::gen(&self.ctx).pow(k as u64);
        let mut acc = NFElem::zero(&self.ctx);
        for c in self.coords.iter().rev() {
            acc = acc.mul(&zk).add(&NFElem::from_rational(&self.ctx, c.clone()));
        }
        acc
    }

    /// Coordinates (a, b) with self = a + b*s, if self lies in Q(s) for the
    /// given degree-2 element s.
    pub fn as_quadratic(&self, s: &NFElem) -> Option<(BigRational, BigRational)> {
        self.check(s);
        // solve a*1 + b*s = self coordinate-wise; overdetermined linear
        // system with 2 unknowns
        // find a pivot row where s has nonzero coordinate beyond position 0
        let pivot = (1..self.coords.len()).find(|&i| !s.coords()[i].is_zero());
        let (a, b) = match pivot {
            None => {
                // s rational: degenerate, treat as rational recognition
                (self.as_rational()?, BigRational::zero())
            }
            Some(i) => {
                let b = &self.coords[i] / &s.coords()[i];
                let a = &self.coords[0] - &(&b * &s.coords()[0]);
                (a, b)
            }
        };
        let recon = NFElem::from_rational(&self.ctx, a.clone())
            .add(&s.scale(&b));
        (recon == *self).then_some((a, b))
    }

    /// zeta_m inside Q(zeta_n), for m dividing n.
    pub fn root_of_unity(ctx: &Ctx, m: usize) -> NFElem {
        let n = ctx
            .cyclotomic_order
            .expect("root_of_unity requires a cyclotomic context");
        assert!(m >= 1 && n % m == 0, "order must divide the context order");
        NFElem::gen(ctx).pow((n / m) as u64)
    }

    /// Square root of a squarefree integer m (possibly negative), when it
    /// exists in the cyclotomic context: built from zeta_8 for 2 and Gauss
    /// sums for odd primes.
    pub fn sqrt_int(ctx: &Ctx, m: i64) -> Option<NFElem> {
        let n = ctx.cyclotomic_order?;
        assert!(m != 0);
        let mut acc = NFElem::one(ctx);
        // running square of acc, as integer, to fix the sign at the end
        let mut have = 1i64;
        let mm = m.unsigned_abs();
        let mut rest = mm;
        let mut p = 2u64;
        while rest > 1 {
            if rest % p == 0 {
                rest /= p;
                assert!(rest % p != 0, "m must be squarefree");
                if p == 2 {
                    if n % 8 != 0 {
                        return None;
                    }
                    let z8 = NFElem::root_of_unity(ctx, 8);
                    acc = acc.mul(&z8.add(&z8.pow(7)));
                    have *= 2;
                } else {
                    if n % (p as usize) != 0 {
                        return None;
                    }
                    // Gauss sum: sum over a of (a|p) zeta_p^a squares to
                    // (-1)^((p-1)/2) p
                    let zp = NFElem::root_of_unity(ctx, p as usize);
                    let mut g = NFElem::zero(ctx);
                    for a in 1..p {
                        let leg = crate::poly::pow_mod(a, (p - 1) / 2, p);
                        let term = zp.pow(a);
                        g = if leg == 1 { g.add(&term) } else { g.sub(&term) };
                    }
                    acc = acc.mul(&g);
                    have *= if p % 4 == 1 { p as i64 } else { -(p as i64) };
                }
            } else {
                p += 1;
            }
        }
        // have = acc^2; want m
        if have == m {
            return Some(acc);
        }
        if have == -m {
            // multiply by i
            if n % 4 != 0 {
                return None;
            }
            return Some(acc.mul(&NFElem::root_of_unity(ctx, 4)));
        }
        None
    }

    /// A square root in a cyclotomic context.  Tiered search:
    /// 1. (root of unity) * rational, via `sqrt_int`;
    /// 2. elements of a quadratic subfield Q(sqrt(d)), by the classical
    ///    nested-radical identity when the norm is a rational square;
    /// 3. (1 - zeta^a)^2 * (tier-1 form), which covers discriminants built
    ///    from differences of roots of unity.
    pub fn sqrt(&self) -> Result<NFElem, NumFieldError> {
        let n = self
            .ctx
            .cyclotomic_order
            .ok_or_else(|| NumFieldError::NoSquareRoot("not a cyclotomic context".into()))?;
        if self.is_zero() {
            return Ok(self.clone());
        }
        if let Some(r) = self.sqrt_monomial_form() {
            return Ok(r);
        }
        if let Some(r) = self.sqrt_quadratic_subfield() {
            return Ok(r);
        }
        let zeta = NFElem::gen(&self.ctx);
        let one = NFElem::one(&self.ctx);
        let factors: Vec<NFElem> = (1..n)
            .map(|a| one.sub(&zeta.pow(a as u64)))
            .filter(|w| !w.is_zero())
            .collect();
        for w in &factors {
            let t = self.div(&w.mul(w)).expect("nonzero");
            if let Some(r) = t.sqrt_monomial_form().or_else(|| t.sqrt_quadratic_subfield()) {
                return Ok(w.mul(&r));
            }
        }
        for w1 in &factors {
            for w2 in &factors {
                let w = w1.mul(w2);
                let t = self.div(&w.mul(&w)).expect("nonzero");
                if let Some(r) = t.sqrt_monomial_form() {
                    return Ok(w.mul(&r));
                }
            }
        }
        if let Some(r) = self.sqrt_modular() {
            return Ok(r);
        }
        Err(NumFieldError::NoSquareRoot(
            "square root not found by the tiered search".into(),
        ))
    }

    /// Tier 4: general square roots by modular evaluation.  Embed at all
    /// roots of the cyclotomic polynomial modulo a large prime p = 1 mod n,
    /// take modular square roots, solve for power-basis coordinates over
    /// every sign pattern, and recover rationals by rational reconstruction;
    /// every candidate is verified exactly before being returned.
    fn sqrt_modular(&self) -> Option<NFElem> {
        let n = self.ctx.cyclotomic_order?;
        let d = self.ctx.degree();
        if d > 16 {
            return None;
        }
        // cheap prescreen: a square must be a quadratic residue at every
        // embedding modulo any usable prime, so a single non-residue rules
        // the element out without the full pattern search
        let mut small: BigInt = BigInt::from(1_000_000_007u64);
        let mut screened = 0;
        while screened < 3 {
            let p = next_prime_congruent(&small, n as u64);
            small = &p + 1;
            match self.residue_screen(&p, n) {
                Some(true) => screened += 1,
                Some(false) => return None,
                None => continue,
            }
        }
        let mut base: BigInt = BigInt::one() << 160;
        for _ in 0..4 {
            let p = next_prime_congruent(&base, n as u64);
            base = &p + 1;
            if let Some(r) = self.sqrt_modular_at(&p, n, d) {
                return Some(r);
            }
        }
        None
    }

    /// Whether every embedding modulo p is a quadratic residue; None when
    /// the prime is unusable (some embedding is zero).
    fn residue_screen(&self, p: &BigInt, n: usize) -> Option<bool> {
        let z = primitive_root_of_unity_mod(p, n as u64)?;
        let exp = (p - BigInt::one()) / BigInt::from(2);
        for j in (1..n).filter(|j| gcd_usize(*j, n) == 1) {
            let r = z.modpow(&BigInt::from(j), p);
            let mut acc = BigInt::zero();
            let mut pw = BigInt::one();
            for c in &self.coords {
                let num = c.numer().mod_floor(p);
                let den_inv = mod_inverse(&c.denom().mod_floor(p), p)?;
                acc = (acc + num * den_inv % p * &pw) % p;
                pw = &pw * &r % p;
            }
            if acc.is_zero() {
                return None;
            }
            if !acc.modpow(&exp, p).is_one() {
                return Some(false);
            }
        }
        Some(true)
    }

    fn sqrt_modular_at(&self, p: &BigInt, n: usize, d: usize) -> Option<NFElem> {
        let z = primitive_root_of_unity_mod(p, n as u64)?;
        let roots: Vec<BigInt> = (1..n)
            .filter(|j| gcd_usize(*j, n) == 1)
            .map(|j| z.modpow(&BigInt::from(j), p))
            .collect();
        debug_assert_eq!(roots.len(), d);
        // residues of the element at each embedding
        let mut evals = Vec::with_capacity(d);
        for r in &roots {
            let mut acc = BigInt::zero();
            let mut pw = BigInt::one();
            for c in &self.coords {
                let num = c.numer().mod_floor(p);
                let den_inv = mod_inverse(&c.denom().mod_floor(p), p)?;
                acc = (acc + num * den_inv % p * &pw) % p;
                pw = &pw * r % p;
            }
            if acc.is_zero() {
                return None;
            }
            evals.push(acc);
        }
        let sqrts: Option<Vec<BigInt>> = evals.iter().map(|e| tonelli_shanks(e, p)).collect();
        let sqrts = sqrts?;
        // Vandermonde matrix of the embeddings, inverted once
        let vand: Vec<Vec<BigInt>> = roots
            .iter()
            .map(|r| {
                let mut row = Vec::with_capacity(d);
                let mut pw = BigInt::one();
                for _ in 0..d {
                    row.push(pw.clone());
                    pw = &pw * r % p;
                }
                row
            })
            .collect();
        let vinv = mod_matrix_inverse(&vand, p)?;
        // overall sign is free, so fix the first embedding's choice
        for pattern in 0u32..(1 << (d - 1)) {
            let y: Vec<BigInt> = sqrts
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    if i > 0 && (pattern >> (i - 1)) & 1 == 1 {
                        (p - s) % p
                    } else {
                        s.clone()
                    }
                })
                .collect();
            // wrong sign patterns reconstruct to garbage of size ~sqrt(p);
            // genuine roots have small height, so a tight bound on every
            // coordinate filters almost all patterns before the exact check
            let height: BigInt = BigInt::one() << 60;
            let mut coords = Vec::with_capacity(d);
            let mut ok = true;
            for row in &vinv {
                let mut acc = BigInt::zero();
                for (a, b) in row.iter().zip(&y) {
                    acc = (acc + a * b) % p;
                }
                match rational_reconstruct(&acc, p) {
                    Some(r) if r.numer().abs() < height && r.denom().abs() < height => {
                        coords.push(r)
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let cand = NFElem {
                ctx: self.ctx.clone(),
                coords,
            };
            if cand.mul(&cand) == *self {
                return Some(cand);
            }
        }
        None
    }

    /// Tier 1: self = u^2 * rational for a root of unity u.
    fn sqrt_monomial_form(&self) -> Option<NFElem> {
        let n = self.ctx.cyclotomic_order?;
        let zeta = NFElem::gen(&self.ctx);
        let mut u = NFElem::one(&self.ctx);
        for _ in 0..n {
            let u2 = u.mul(&u);
            if let Some(r) = self.div(&u2).expect("u2 nonzero").as_rational() {
                // r = s^2 * m with m squarefree
                let (s, m) = rational_square_decompose(&r);
                let root = if m == 1 {
                    NFElem::from_rational(&self.ctx, s)
                } else {
                    NFElem::sqrt_int(&self.ctx, m)?.scale(&s)
                };
                return Some(u.mul(&root));
            }
            u = u.mul(&zeta);
        }
        None
    }

    /// Square root of a rational number, when it lies in the context:
    /// r = s^2 m with m squarefree, then s * sqrt_int(m).
    fn sqrt_rational_in_ctx(ctx: &Ctx, r: &BigRational) -> Option<NFElem> {
        if r.is_zero() {
            return Some(NFElem::zero(ctx));
        }
        let (s, m) = rational_square_decompose(r);
        if m == 1 {
            Some(NFElem::from_rational(ctx, s))
        } else {
            Some(NFElem::sqrt_int(ctx, m)?.scale(&s))
        }
    }

    /// Tier 2: self = x + y*sqrt(d) in a quadratic subfield with the norm
    /// x^2 - d y^2 a rational square n^2; the classical denesting then
    /// gives sqrt = sqrt((x+n)/2) +/- sqrt((x-n)/2), where each half is a
    /// rational whose square root may involve a further sqrt_int.
    fn sqrt_quadratic_subfield(&self) -> Option<NFElem> {
        for d in [-1i64, 2, -2, 3, -3, 5, -5, 6, -6, 10, -10, 15, -15, 30, -30] {
            let Some(s) = NFElem::sqrt_int(&self.ctx, d) else {
                continue;
            };
            let Some((x, y)) = self.as_quadratic(&s) else {
                continue;
            };
            if y.is_zero() {
                continue;
            }
            let norm = &x * &x - BigRational::from(BigInt::from(d)) * &y * &y;
            let (nr, m) = rational_square_decompose(&norm);
            if m != 1 {
                continue;
            }
            let two = BigRational::from(BigInt::from(2));
            let t1 = (&x + &nr) / &two;
            let t2 = (&x - &nr) / &two;
            let (Some(r1), Some(r2)) = (
                NFElem::sqrt_rational_in_ctx(&self.ctx, &t1),
                NFElem::sqrt_rational_in_ctx(&self.ctx, &t2),
            ) else {
                continue;
            };
            for cand in [r1.add(&r2), r1.sub(&r2)] {
                if cand.mul(&cand) == *self {
                    return Some(cand);
                }
            }
        }
        None
    }
}

/// The next probable prime p >= start with p = 1 (mod n).  Candidates are
/// only probable primes; a false positive merely makes the modular square
/// root fail its exact verification.
fn next_prime_congruent(start: &BigInt, n: u64) -> BigInt {
    let n = BigInt::from(n);
    let mut p = start - (start - BigInt::one()).mod_floor(&n) + &n;
    while !is_probable_prime(&p) {
        p += &n;
    }
    p
}

/// Miller-Rabin with a fixed set of bases.
fn is_probable_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2);
    if n < &two {
        return false;
    }
    for small in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let s = BigInt::from(small);
        if *n == s {
            return true;
        }
        if (n % &s).is_zero() {
            return false;
        }
    }
    let n1 = n - BigInt::one();
    let r = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> r;
    'bases: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..r {
            x = x.modpow(&two, n);
            if x == n1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn gcd_usize(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd_usize(b, a % b)
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    if a.is_zero() {
        return None;
    }
    Some(a.modpow(&(p - BigInt::from(2)), p))
}

/// A primitive n-th root of unity modulo a prime p = 1 (mod n).
fn primitive_root_of_unity_mod(p: &BigInt, n: u64) -> Option<BigInt> {
    let e = (p - BigInt::one()) / BigInt::from(n);
    let mut qs = vec![];
    let mut m = n;
    let mut q = 2;
    while q * q <= m {
        if m % q == 0 {
            qs.push(q);
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        qs.push(m);
    }
    for g in 2u32..200 {
        let z = BigInt::from(g).modpow(&e, p);
        if z.is_one() {
            continue;
        }
        if qs
            .iter()
            .all(|&q| !z.modpow(&BigInt::from(n / q), p).is_one())
        {
            return Some(z);
        }
    }
    None
}

/// Tonelli-Shanks square root modulo an odd prime, None for non-residues.
fn tonelli_shanks(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let one = BigInt::one();
    let two = BigInt::from(2);
    if a.is_zero() {
        return Some(BigInt::zero());
    }
    let legendre = a.modpow(&((p - &one) / &two), p);
    if legendre != one {
        return None;
    }
    let s = (p - &one).trailing_zeros().unwrap_or(0);
    let q = (p - &one) >> s;
    if s == 1 {
        return Some(a.modpow(&((p + &one) / BigInt::from(4)), p));
    }
    // a quadratic non-residue
    let mut zc = two.clone();
    loop {
        if zc.modpow(&((p - &one) / &two), p) != one {
            break;
        }
        zc += &one;
    }
    let mut m = s;
    let mut c = zc.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) / &two), p);
    while !t.is_one() {
        let mut i = 0;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = t2.modpow(&two, p);
            i += 1;
            if i == m {
                return None;
            }
        }
        let b = c.modpow(&(BigInt::one() << (m - i - 1)), p);
        m = i;
        c = b.modpow(&two, p);
        t = t * &c % p;
        r = r * &b % p;
    }
    Some(r)
}

/// Inverse of a square matrix modulo a prime, by Gauss-Jordan elimination.
fn mod_matrix_inverse(mat: &[Vec<BigInt>], p: &BigInt) -> Option<Vec<Vec<BigInt>>> {
    let d = mat.len();
    let mut a: Vec<Vec<BigInt>> = mat.to_vec();
    let mut inv: Vec<Vec<BigInt>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    for col in 0..d {
        let piv = (col..d).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let f = mod_inverse(&a[col][col], p)?;
        for j in 0..d {
            a[col][j] = &a[col][j] * &f % p;
            inv[col][j] = &inv[col][j] * &f % p;
        }
        for r in 0..d {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..d {
                    a[r][j] = (&a[r][j] + p - &a[col][j] * &f % p) % p;
                    inv[r][j] = (&inv[r][j] + p - &inv[col][j] * &f % p) % p;
                }
            }
        }
    }
    Some(inv)
}

/// Recover a rational with small numerator and denominator from its
/// residue modulo p (standard lattice reduction by the Euclidean
/// algorithm); the caller verifies the result exactly.
fn rational_reconstruct(c: &BigInt, p: &BigInt) -> Option<BigRational> {
    let bound = p.sqrt() >> 1;
    let (mut r0, mut t0) = (p.clone(), BigInt::zero());
    let (mut r1, mut t1) = (c.mod_floor(p), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        t0 = t1;
        r1 = r2;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if t1.is_negative() {
        r1 = -r1;
        t1 = -t1;
    }
    Some(BigRational::new(r1, t1))
}

/// r = s^2 * m with m a squarefree integer (sign carried by m).
fn rational_square_decompose(r: &BigRational) -> (BigRational, i64) {
    let num = r.numer().clone();
    let den = r.denom().clone();
    // r = num/den = (num*den) / den^2
    let n = num * &den;
    let (s_num, m) = int_square_decompose(&n);
    (BigRational::new(s_num, den), m)
}

fn int_square_decompose(n: &BigInt) -> (BigInt, i64) {
    let neg = n.is_negative();
    let mut abs = n.abs();
    let mut s = BigInt::one();
    let mut m = 1i64;
    let mut p = BigInt::from(2);
    // trial division; the rationals appearing here are tiny
    while &p * &p <= abs {
        let mut count = 0u32;
        while (&abs % &p).is_zero() {
            abs /= &p;
            count += 1;
        }
        if count >= 2 {
            s *= p.pow(count / 2);
        }
        if count % 2 == 1 {
            m *= i64::try_from(&p).expect("squarefree part stays small");
        }
        p += 1;
    }
    if abs > BigInt::one() {
        m *= i64::try_from(&abs).expect("squarefree part stays small");
    }
    if neg {
        m = -m;
    }
    (s, m)
}

/// Polynomial with coefficients in a number field, ascending and trimmed.
#[derive(Clone)]
pub struct NFPoly {
    ctx: Ctx,
    coeffs: Vec<NFElem>,
}

impl PartialEq for NFPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl fmt::Debug for NFPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({:?})*x^{i}", c))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl NFPoly {
    pub fn new(ctx: &Ctx, mut coeffs: Vec<NFElem>) -> NFPoly {
        while matches!(coeffs.last(), Some(c) if c.is_zero()) {
            coeffs.pop();
        }
        NFPoly {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    pub fn zero(ctx: &Ctx) -> NFPoly {
        NFPoly::new(ctx, vec![])
    }

    pub fn one(ctx: &Ctx) -> NFPoly {
        NFPoly::constant(NFElem::one(ctx))
    }

    pub fn constant(c: NFElem) -> NFPoly {
        let ctx = c.ctx().clone();
        NFPoly::new(&ctx, vec![c])
    }

    /// Monic monomial x^k.
    pub fn monomial(ctx: &Ctx, k: usize) -> NFPoly {
        let mut coeffs = vec![NFElem::zero(ctx); k + 1];
        coeffs[k] = NFElem::one(ctx);
        NFPoly::new(ctx, coeffs)
    }

    /// Embed a rational polynomial.
    pub fn from_qpoly(ctx: &Ctx, f: &QPoly) -> NFPoly {
        NFPoly::new(
            ctx,
            f.coeffs()
                .iter()
                .map(|c| NFElem::from_rational(ctx, c.clone()))
                .collect(),
        )
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> NFElem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| NFElem::zero(&self.ctx))
    }

    pub fn coeffs(&self) -> &[NFElem] {
        &self.coeffs
    }

    pub fn leading(&self) -> NFElem {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| NFElem::zero(&self.ctx))
    }

    pub fn add(&self, other: &NFPoly) -> NFPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        NFPoly::new(
            &self.ctx,
            (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect(),
        )
    }

    pub fn sub(&self, other: &NFPoly) -> NFPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        NFPoly::new(
            &self.ctx,
            (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect(),
        )
    }

    pub fn neg(&self) -> NFPoly {
        NFPoly::new(&self.ctx, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn mul(&self, other: &NFPoly) -> NFPoly {
        if self.is_zero() || other.is_zero() {
            return NFPoly::zero(&self.ctx);
        }
        let mut out = vec![NFElem::zero(&self.ctx); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        NFPoly::new(&self.ctx, out)
    }

    pub fn scale(&self, c: &NFElem) -> NFPoly {
        NFPoly::new(&self.ctx, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn monic(&self) -> NFPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().inverse().expect("nonzero leading"))
    }

    pub fn eval(&self, x: &NFElem) -> NFElem {
        let mut acc = NFElem::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> NFPoly {
        if self.coeffs.len() <= 1 {
            return NFPoly::zero(&self.ctx);
        }
        NFPoly::new(
            &self.ctx,
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.scale(&big((i + 1) as i64)))
                .collect(),
        )
    }

    pub fn divrem(&self, div: &NFPoly) -> (NFPoly, NFPoly) {
        let dd = div.degree().expect("division by zero polynomial");
        let inv = div.leading().inverse().expect("nonzero leading");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (NFPoly::zero(&self.ctx), self.clone());
        }
        let mut quo = vec![NFElem::zero(&self.ctx); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i].mul(&inv);
            if !c.is_zero() {
                quo[i - dd] = c.clone();
                for (j, dc) in div.coeffs.iter().enumerate() {
                    rem[i - dd + j] = rem[i - dd + j].sub(&c.mul(dc));
                }
            }
            rem.truncate(i);
        }
        (NFPoly::new(&self.ctx, quo), NFPoly::new(&self.ctx, rem))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &NFPoly) -> NFPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn is_separable(&self) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Substitute x^n for x.
    pub fn compose_power(&self, n: usize) -> NFPoly {
        assert!(n >= 1);
        let mut out = vec![NFElem::zero(&self.ctx); (self.coeffs.len() - 1) * n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * n] = c.clone();
        }
        NFPoly::new(&self.ctx, out)
    }

    /// Substitute a*x + b for x.
    pub fn compose_linear(&self, a: &NFElem, b: &NFElem) -> NFPoly {
        let lin = NFPoly::new(&self.ctx, vec![b.clone(), a.clone()]);
        let mut acc = NFPoly::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&NFPoly::constant(c.clone()));
        }
        acc
    }

    /// Apply a map to every coefficient (e.g. a Galois automorphism).
    pub fn map_coeffs(&self, f: impl Fn(&NFElem) -> NFElem) -> NFPoly {
        NFPoly::new(&self.ctx, self.coeffs.iter().map(f).collect())
    }

    /// The rational polynomial, when every coefficient lies in Q.
    pub fn as_qpoly(&self) -> Option<QPoly> {
        let coeffs: Option<Vec<BigRational>> =
            self.coeffs.iter().map(|c| c.as_rational()).collect();
        Some(QPoly::from_coeffs(coeffs?))
    }
}

/// Extended gcd returning (g, u) with u*a = g mod b.
fn half_ext_gcd(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut u0 = QPoly::one();
    let mut u1 = QPoly::zero();
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let u = &u0 - &(&q * &u1);
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = u;
    }
    (r0, u0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::bigfrac;

    fn quad_ctx(c0: i64) -> Ctx {
        // x^2 + c0
        NumberFieldCtx::new(QPoly::from_ints(&[c0, 0, 1])).unwrap()
    }

    #[test]
    fn arithmetic_in_quadratic_fields() {
        // x*x = -2 in Q[x]/(x^2+2)
        let ctx = quad_ctx(2);
        let x = NFElem::gen(&ctx);
        assert_eq!(x.mul(&x), NFElem::from_int(&ctx, -2));
        // (1+x)/(1+x) = 1
        let e = NFElem::one(&ctx).add(&x);
        assert!(e.div(&e).unwrap().is_one());
        // (1+x)(1-x) = 2 in Q[x]/(x^2+1)
        let ctx = quad_ctx(1);
        let x = NFElem::gen(&ctx);
        let a = NFElem::one(&ctx).add(&x);
        let b = NFElem::one(&ctx).sub(&x);
        assert_eq!(a.mul(&b), NFElem::from_int(&ctx, 2));
    }

    #[test]
    fn minimal_polynomials() {
        let ctx = quad_ctx(2);
        let x = NFElem::gen(&ctx);
        assert_eq!(x.minimal_polynomial(), QPoly::from_ints(&[2, 0, 1]));
        let r = NFElem::from_rational(&ctx, bigfrac(3, 2));
        assert_eq!(
            r.minimal_polynomial(),
            QPoly::from_coeffs(vec![bigfrac(-3, 2), big(1)])
        );
        // 1 + sqrt(2) in Q[x]/(x^2-2): T^2 - 2T - 1
        let ctx = NumberFieldCtx::new(QPoly::from_ints(&[-2, 0, 1])).unwrap();
        let e = NFElem::one(&ctx).add(&NFElem::gen(&ctx));
        assert_eq!(e.minimal_polynomial(), QPoly::from_ints(&[-1, -2, 1]));
    }

    #[test]
    fn minimal_polynomial_annihilates() {
        let ctx = NumberFieldCtx::cyclotomic(12);
        let e = NFElem::gen(&ctx)
            .add(&NFElem::from_int(&ctx, 3))
            .mul(&NFElem::gen(&ctx).pow(5));
        let mp = e.minimal_polynomial();
        assert!(ctx.degree() % mp.degree().unwrap() == 0);
        // evaluate mp at e inside the field
        let mut acc = NFElem::zero(&ctx);
        for c in mp.coeffs().iter().rev() {
            acc = acc.mul(&e).add(&NFElem::from_rational(&ctx, c.clone()));
        }
        assert!(acc.is_zero());
    }

    #[test]
    fn algebraic_integer_examples() {
        let ctx = quad_ctx(2);
        assert!(!NFElem::from_rational(&ctx, bigfrac(1, 2)).is_algebraic_integer());
        assert!(NFElem::gen(&ctx).is_algebraic_integer());
        assert!(!NFElem::from_rational(&ctx, bigfrac(35152, 9)).is_algebraic_integer());
    }

    #[test]
    fn integrality_closed_under_sum_product() {
        let ctx = NumberFieldCtx::cyclotomic(12);
        let z = NFElem::gen(&ctx);
        let cases = [
            z.clone(),
            z.pow(5).add(&NFElem::from_int(&ctx, 2)),
            z.pow(2).sub(&z),
        ];
        for a in &cases {
            for b in &cases {
                assert!(a.add(b).is_algebraic_integer());
                assert!(a.mul(b).is_algebraic_integer());
            }
        }
    }

    #[test]
    fn sqrt_constants_in_master_field() {
        let ctx = NumberFieldCtx::master();
        for m in [2i64, -2, 3, -3, 5, -1, 6, 15, -5] {
            let s = NFElem::sqrt_int(&ctx, m).unwrap_or_else(|| panic!("sqrt({m})"));
            assert_eq!(s.mul(&s), NFElem::from_int(&ctx, m), "sqrt({m})^2");
        }
        // zeta_7 is not in Q(zeta_120), so sqrt(-7) should be unavailable
        assert!(NFElem::sqrt_int(&ctx, -7).is_none());
    }

    #[test]
    fn sqrt_of_root_of_unity_times_rational() {
        let ctx = NumberFieldCtx::master();
        let i = NFElem::root_of_unity(&ctx, 4);
        let e = i.scale(&big(18)); // 18i = (3 zeta_8 sqrt2)^2
        let s = e.sqrt().unwrap();
        assert_eq!(s.mul(&s), e);
        let m3 = NFElem::from_int(&ctx, -12);
        let s = m3.sqrt().unwrap();
        assert_eq!(s.mul(&s), m3);
    }

    #[test]
    fn quadratic_recognition() {
        let ctx = NumberFieldCtx::master();
        let s3 = NFElem::sqrt_int(&ctx, 3).unwrap();
        let e = s3.scale(&bigfrac(-225, 4)).add(&NFElem::from_rational(&ctx, bigfrac(375, 4)));
        let (a, b) = e.as_quadratic(&s3).unwrap();
        assert_eq!(a, bigfrac(375, 4));
        assert_eq!(b, bigfrac(-225, 4));
        // an element genuinely of degree 4 is rejected
        let z = NFElem::gen(&ctx);
        assert!(z.as_quadratic(&s3).is_none());
        assert_eq!(e.minimal_polynomial().degree(), Some(2));
    }

    #[test]
    fn ctx_construction_guards() {
        assert!(NumberFieldCtx::new(QPoly::from_ints(&[-1, 0, 1])).is_err());
        assert!(NumberFieldCtx::new(QPoly::from_ints(&[5])).is_err());
        assert!(NumberFieldCtx::new(QPoly::from_ints(&[1, 0, 2])).is_err());
    }

    #[test]
    fn nfpoly_arithmetic() {
        let ctx = NumberFieldCtx::cyclotomic(12);
        let z = NFElem::gen(&ctx);
        // (x - z)(x + z) = x^2 - z^2
        let a = NFPoly::new(&ctx, vec![z.neg(), NFElem::one(&ctx)]);
        let b = NFPoly::new(&ctx, vec![z.clone(), NFElem::one(&ctx)]);
        let prod = a.mul(&b);
        assert_eq!(
            prod,
            NFPoly::new(
                &ctx,
                vec![z.pow(2).neg(), NFElem::zero(&ctx), NFElem::one(&ctx)]
            )
        );
        // divrem roundtrip
        let (q, r) = prod.divrem(&a);
        assert_eq!(q, b);
        assert!(r.is_zero());
        // gcd of the product with one factor
        assert_eq!(prod.gcd(&a), a.monic());
        // separability
        assert!(prod.is_separable());
        let sq = a.mul(&a);
        assert!(!sq.is_separable());
        // rational recognition
        assert!(prod.as_qpoly().is_none());
        let r4 = NFPoly::from_qpoly(&ctx, &QPoly::from_ints(&[1, 0, 2]));
        assert_eq!(r4.as_qpoly().unwrap(), QPoly::from_ints(&[1, 0, 2]));
        // x^2 - z^2 evaluated at z vanishes
        assert!(prod.eval(&z).is_zero());
    }

    #[test]
    fn galois_maps() {
        let ctx = NumberFieldCtx::cyclotomic(12);
        let z = NFElem::gen(&ctx);
        let s3 = NFElem::sqrt_int(&ctx, 3).unwrap();
        // x -> x^5 negates sqrt3 = z + z^-1 ... check consistency
        let im = s3.galois_map(5);
        assert_eq!(im.mul(&im), NFElem::from_int(&ctx, 3));
        assert_eq!(z.galois_map(5), z.pow(5));
    }
}
