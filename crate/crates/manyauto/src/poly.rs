//! Exact univariate polynomial arithmetic over Q.
//!
//! Dense representation with `BigRational` coefficients in ascending degree
//! order.  Provides gcd / squarefree part, resultants (including elimination
//! against a polynomial parameter), discriminants, cyclotomic polynomials
//! and a modular irreducibility sieve.  Everything here is exact; no
//! floating point anywhere.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("operation undefined for constant polynomials")]
    ConstantPolynomial,
    #[error("input must be squarefree")]
    NotSquarefree,
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("{0}")]
    Domain(String),
}

/// Outcome of the modular irreducibility sieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    Reducible,
    Unknown,
}

/// Dense univariate polynomial with exact rational coefficients,
/// ascending degree order, no trailing zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

pub fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn bigfrac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*T")?,
                _ => write!(f, "{c}*T^{i}")?,
            }
        }
        Ok(())
    }
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        QPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = QPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// `x^n`
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        QPoly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = QPoly { coeffs };
        p.trim();
        p
    }

    /// Ascending integer coefficients, e.g. `[-1, 0, 1]` for `x^2 - 1`.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        QPoly::from_coeffs(coeffs.iter().map(|&c| big(c)).collect())
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with deg 0 for constants *and* the zero polynomial.
    pub fn deg_or0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, s: &BigRational) -> QPoly {
        if s.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        self.scale(&self.leading().recip())
    }

    pub fn derivative(&self) -> QPoly {
        if self.coeffs.len() <= 1 {
            return QPoly::zero();
        }
        QPoly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * big(i as i64 + 1))
                .collect(),
        )
    }

    /// Substitute `x^n` for `x`.
    pub fn compose_power(&self, n: usize) -> QPoly {
        assert!(n >= 1);
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); (self.coeffs.len() - 1) * n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * n] = c.clone();
        }
        QPoly { coeffs }
    }

    /// Reverse the coefficients: `x^deg * f(1/x)`.
    pub fn reversed(&self) -> QPoly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        QPoly::from_coeffs(coeffs)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        if self.is_zero() || self.degree().unwrap() < dd {
            return (QPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let n = self.degree().unwrap();
        let lead = d.leading();
        let mut quot = vec![BigRational::zero(); n - dd + 1];
        for i in (dd..=n).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = &rem[i] / &lead;
            for (j, dc) in d.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = &rem[idx] - &(&q * dc);
            }
            quot[i - dd] = q;
        }
        (QPoly::from_coeffs(quot), QPoly::from_coeffs(rem))
    }

    /// Exact division; `None` if the remainder is nonzero.
    pub fn div_exact(&self, d: &QPoly) -> Option<QPoly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &QPoly) -> bool {
        other.divrem(self).1.is_zero()
    }

    /// Monic gcd via the primitive polynomial remainder sequence.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let mut a = self.primitive_int();
        let mut b = other.primitive_int();
        if int_deg(&a) < int_deg(&b) {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            if int_is_zero(&b) {
                return int_to_qpoly(&a).monic();
            }
            let r = int_prem(&a, &b);
            a = b;
            b = int_primitive(&r);
        }
    }

    /// Monic polynomial with the same distinct roots, each simple.
    pub fn squarefree_part(&self) -> Result<QPoly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if self.degree() == Some(0) {
            return Ok(QPoly::one());
        }
        let g = self.gcd(&self.derivative());
        Ok(self.div_exact(&g).expect("gcd divides").monic())
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Clear denominators and content: primitive integer coefficients with
    /// positive leading coefficient.
    pub fn primitive_int(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &den).to_integer()).collect();
        let mut content = BigInt::zero();
        for c in &ints {
            content = content.gcd(c);
        }
        if ints.last().unwrap().sign() == Sign::Minus {
            content = -content;
        }
        ints.iter().map(|c| c / &content).collect()
    }

    /// Resultant Res(self, other).
    pub fn resultant(&self, other: &QPoly) -> BigRational {
        resultant_q(self, other)
    }

    /// disc(f) = (-1)^{d(d-1)/2} Res(f, f') / lc(f).
    pub fn discriminant(&self) -> Result<BigRational, PolyError> {
        let d = self.degree().ok_or(PolyError::ZeroPolynomial)?;
        if d == 0 {
            return Err(PolyError::ConstantPolynomial);
        }
        let res = self.resultant(&self.derivative());
        let sign = if (d * (d - 1) / 2) % 2 == 0 {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        Ok(sign * res / self.leading())
    }

    /// The n-th cyclotomic polynomial.
    pub fn cyclotomic(n: usize) -> Result<QPoly, PolyError> {
        if n == 0 {
            return Err(PolyError::Domain("cyclotomic index must be positive".into()));
        }
        // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
        let mut num = QPoly::monomial(n) - QPoly::one();
        for d in 1..n {
            if n % d == 0 {
                let phi = QPoly::cyclotomic(d)?;
                num = num.div_exact(&phi).expect("cyclotomic division is exact");
            }
        }
        Ok(num)
    }

    /// All rational roots (via the rational root theorem on the primitive
    /// integer model).
    pub fn rational_roots(&self) -> Vec<BigRational> {
        if self.is_zero() || self.degree() == Some(0) {
            return vec![];
        }
        // strip x^k
        let mut f = self.clone();
        let mut roots = vec![];
        while f.coeff(0).is_zero() {
            if !roots.contains(&BigRational::zero()) {
                roots.push(BigRational::zero());
            }
            f = f.div_exact(&QPoly::monomial(1)).unwrap();
        }
        if f.degree() == Some(0) {
            return roots;
        }
        let ints = f.primitive_int();
        let a0 = BigInt::from_biguint(Sign::Plus, ints[0].magnitude().clone());
        let an = BigInt::from_biguint(Sign::Plus, ints.last().unwrap().magnitude().clone());
        for p in divisors_big(&a0) {
            for q in divisors_big(&an) {
                for sgn in [1i64, -1] {
                    let cand = BigRational::new(&p * BigInt::from(sgn), q.clone());
                    if f.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand.clone());
                    }
                }
            }
        }
        roots
    }

    /// Modular degree-pattern sieve for irreducibility over Q.
    ///
    /// Factors modulo `num_primes` odd primes not dividing lc * disc,
    /// intersects the possible rational factor degrees, and reports
    /// `Irreducible` only when no proper factor degree survives.  A rational
    /// root exhibits reducibility directly.  Anything else is `Unknown`.
    pub fn irreducible_over_q(&self, num_primes: usize) -> Result<Irreducibility, PolyError> {
        let d = self.degree().ok_or(PolyError::ZeroPolynomial)?;
        if d == 0 {
            return Err(PolyError::Domain("degree must be >= 1".into()));
        }
        if !self.is_squarefree() {
            return Err(PolyError::NotSquarefree);
        }
        if d == 1 {
            return Ok(Irreducibility::Irreducible);
        }
        if !self.rational_roots().is_empty() {
            return Ok(Irreducibility::Reducible);
        }
        if d <= 3 {
            // squarefree, no rational root, degree 2 or 3
            return Ok(Irreducibility::Irreducible);
        }
        if d == 4 {
            // no rational root, so only a 2+2 split is possible; decide it
            // exactly through the resolvent cubic
            return Ok(if self.quartic_has_quadratic_factor() {
                Irreducibility::Reducible
            } else {
                Irreducibility::Irreducible
            });
        }
        let ints = self.primitive_int();
        let lead = ints.last().unwrap().clone();
        let disc_num = {
            let disc = self.discriminant()?;
            disc.numer().clone() * disc.denom().clone()
        };
        let mut possible: Vec<bool> = vec![true; d + 1];
        let mut used = 0usize;
        let mut p = 3u64;
        while used < num_primes {
            p = next_prime(p);
            let pb = BigInt::from(p);
            if (&lead % &pb).is_zero() || (&disc_num % &pb).is_zero() {
                continue;
            }
            used += 1;
            let degs = factor_degrees_mod_p(&ints, p);
            let mut reach = vec![false; d + 1];
            reach[0] = true;
            for fd in degs {
                for i in (0..=d.saturating_sub(fd)).rev() {
                    if reach[i] {
                        reach[i + fd] = true;
                    }
                }
            }
            for i in 0..=d {
                possible[i] = possible[i] && reach[i];
            }
            if possible.iter().enumerate().all(|(i, &b)| !b || i == 0 || i == d) {
                return Ok(Irreducibility::Irreducible);
            }
        }
        // The sieve is inconclusive (abelian or entangled Galois closures
        // never exhibit a full-degree factor pattern); decide by full
        // factorization.
        let factors = self.factor()?;
        Ok(
            if factors.len() == 1 && factors[0].1 == 1 && factors[0].0.degree() == Some(d) {
                Irreducibility::Irreducible
            } else {
                Irreducibility::Reducible
            },
        )
    }

    /// Whether a squarefree quartic with no rational root splits into two
    /// rational quadratics.  Works on the depressed monic model
    /// y^4 + p y^2 + q y + r: a factorization (y^2+ay+b)(y^2-ay+c) forces
    /// a^2 to be a rational root of the resolvent cubic
    /// z^3 + 2p z^2 + (p^2-4r) z - q^2.
    fn quartic_has_quadratic_factor(&self) -> bool {
        assert_eq!(self.degree(), Some(4));
        let monic = self.monic();
        // depress: y = x + a3/4
        let shift = -monic.coeff(3) / big(4);
        let dep = monic.compose_linear(&BigRational::one(), &shift);
        let p = dep.coeff(2);
        let q = dep.coeff(1);
        let r = dep.coeff(0);
        if q.is_zero() {
            // (y^2+b)(y^2+c) with b+c = p, bc = r: needs p^2 - 4r square
            return is_rational_square(&(&p * &p - big(4) * &r));
        }
        let resolvent = QPoly::from_coeffs(vec![
            -(&q * &q),
            &p * &p - big(4) * &r,
            big(2) * &p,
            BigRational::one(),
        ]);
        resolvent
            .rational_roots()
            .iter()
            .any(|z| !z.is_zero() && is_rational_square(z))
    }

    /// Substitute `a*x + b` for `x`.
    pub fn compose_linear(&self, a: &BigRational, b: &BigRational) -> QPoly {
        let lin = QPoly::from_coeffs(vec![b.clone(), a.clone()]);
        let mut acc = QPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &QPoly::constant(c.clone());
        }
        acc
    }
}

fn is_rational_square(x: &BigRational) -> bool {
    if x.is_negative() {
        return false;
    }
    x.numer().sqrt().pow(2u32) == *x.numer() && x.denom().sqrt().pow(2u32) == *x.denom()
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + rhs.coeff(i));
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        self + &(-rhs)
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        QPoly::from_coeffs(coeffs)
    }
}

macro_rules! owned_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait for QPoly {
            type Output = QPoly;
            fn $method(self, rhs: QPoly) -> QPoly {
                (&self).$method(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        -&self
    }
}

// ---- integer polynomial helpers (ascending BigInt coefficients) ----

fn int_deg(a: &[BigInt]) -> usize {
    a.len().saturating_sub(1)
}

fn int_is_zero(a: &[BigInt]) -> bool {
    a.is_empty()
}

fn int_trim(mut a: Vec<BigInt>) -> Vec<BigInt> {
    while matches!(a.last(), Some(c) if c.is_zero()) {
        a.pop();
    }
    a
}

fn int_to_qpoly(a: &[BigInt]) -> QPoly {
    QPoly::from_coeffs(a.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

fn int_primitive(a: &[BigInt]) -> Vec<BigInt> {
    if int_is_zero(a) {
        return vec![];
    }
    let mut content = BigInt::zero();
    for c in a {
        content = content.gcd(c);
    }
    if a.last().unwrap().sign() == Sign::Minus {
        content = -content;
    }
    a.iter().map(|c| c / &content).collect()
}

/// Pseudo-remainder of a by b (result of repeatedly clearing the leading
/// term after scaling by lc(b)).
fn int_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    assert!(!int_is_zero(b));
    let db = int_deg(b);
    let lb = b.last().unwrap().clone();
    let mut r = int_trim(a.to_vec());
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r.last().unwrap().clone();
        let mut nr = vec![BigInt::zero(); dr];
        for (i, c) in r[..dr].iter().enumerate() {
            nr[i] = c * &lb;
        }
        for (j, c) in b[..db].iter().enumerate() {
            let idx = dr - db + j;
            nr[idx] = &nr[idx] - &(c * &lr);
        }
        r = int_trim(nr);
    }
    r
}

fn divisors_big(n: &BigInt) -> Vec<BigInt> {
    // positive divisors; fine for the small constants used in root search
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut divs = vec![];
    let mut i = BigInt::one();
    while &i * &i <= n {
        if (&n % &i).is_zero() {
            divs.push(i.clone());
            let j = &n / &i;
            if j != i {
                divs.push(j);
            }
        }
        i += 1;
    }
    divs
}

// ---- resultants ----

/// Resultant of two rational polynomials, via the integer subresultant-style
/// reduction on their primitive models (Bareiss on the Sylvester matrix).
fn resultant_q(f: &QPoly, g: &QPoly) -> BigRational {
    let (df, dg) = match (f.degree(), g.degree()) {
        (Some(a), Some(b)) => (a, b),
        _ => return BigRational::zero(),
    };
    if df == 0 {
        return pow_rational(&f.leading(), dg as u32);
    }
    if dg == 0 {
        return pow_rational(&g.leading(), df as u32);
    }
    // scale to integers: Res(c*f, g) = c^dg Res(f, g)
    let fi = f.primitive_int();
    let gi = g.primitive_int();
    let cf = &f.leading() / BigRational::from_integer(fi.last().unwrap().clone());
    let cg = &g.leading() / BigRational::from_integer(gi.last().unwrap().clone());
    let res = sylvester_det(&fi, &gi);
    BigRational::from_integer(res)
        * pow_rational(&cf, dg as u32)
        * pow_rational(&cg, df as u32)
}

fn pow_rational(b: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= b;
    }
    acc
}

/// Determinant of the Sylvester matrix by fraction-free (Bareiss)
/// elimination over the integers.
fn sylvester_det(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let df = int_deg(f);
    let dg = int_deg(g);
    let n = df + dg;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for i in 0..dg {
        for (j, c) in f.iter().rev().enumerate() {
            m[i][i + j] = c.clone();
        }
    }
    for i in 0..df {
        for (j, c) in g.iter().rev().enumerate() {
            m[dg + i][i + j] = c.clone();
        }
    }
    bareiss_det(m)
}

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i64;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            // pivot search
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Bivariate polynomial in (T, y): the coefficient of `y^i` is a `QPoly`
/// in T.  Only the shape needed for resultant elimination.
#[derive(Clone, Debug)]
pub struct BiPoly {
    pub y_coeffs: Vec<QPoly>,
}

impl BiPoly {
    pub fn new(y_coeffs: Vec<QPoly>) -> Self {
        let mut b = BiPoly { y_coeffs };
        while matches!(b.y_coeffs.last(), Some(c) if c.is_zero()) {
            b.y_coeffs.pop();
        }
        b
    }

    pub fn deg_y(&self) -> usize {
        self.y_coeffs.len().saturating_sub(1)
    }

    pub fn deg_t(&self) -> usize {
        self.y_coeffs.iter().map(|c| c.deg_or0()).max().unwrap_or(0)
    }

    /// Evaluate T := t, producing a polynomial in y.
    pub fn eval_t(&self, t: &BigRational) -> QPoly {
        QPoly::from_coeffs(self.y_coeffs.iter().map(|c| c.eval(t)).collect())
    }

    /// `T - y^n`
    pub fn t_minus_y_pow(n: usize) -> BiPoly {
        let mut y_coeffs = vec![QPoly::zero(); n + 1];
        y_coeffs[0] = QPoly::monomial(1);
        y_coeffs[n] = -QPoly::one();
        BiPoly::new(y_coeffs)
    }

    /// `f(T * y)` as a bivariate polynomial in (T, y).
    pub fn scale_y_by_t(f: &QPoly) -> BiPoly {
        let y_coeffs = f
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| QPoly::monomial(i).scale(c))
            .collect();
        BiPoly::new(y_coeffs)
    }

    /// `f(T - c*y)` as a bivariate polynomial in (T, y).
    pub fn sub_cy_from_t(f: &QPoly, c: &BigRational) -> BiPoly {
        // expand sum_k a_k (T - c y)^k
        let d = f.deg_or0();
        let mut y_coeffs = vec![QPoly::zero(); d + 1];
        // binomials
        for (k, a) in f.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut binom = BigRational::one();
            for j in 0..=k {
                // coeff of y^j in (T - c y)^k: C(k,j) (-c)^j T^{k-j}
                let term = QPoly::monomial(k - j).scale(&(&binom * a * pow_rational(&(-c), j as u32)));
                y_coeffs[j] = &y_coeffs[j] + &term;
                binom = binom * big((k - j) as i64) / big(j as i64 + 1);
            }
        }
        BiPoly::new(y_coeffs)
    }
}

/// Res_y(f(y), F(T, y)) as a polynomial in T, computed by evaluation at
/// integer points followed by Lagrange interpolation.
pub fn resultant_elim(f: &QPoly, bi: &BiPoly) -> Result<QPoly, PolyError> {
    let df = f.degree().ok_or(PolyError::ZeroPolynomial)?;
    if bi.y_coeffs.is_empty() {
        return Ok(QPoly::zero());
    }
    // Res_y(f, F(T, .)) has T-degree at most deg_y(f) * deg_T(F) (product of
    // F(T, beta) over the roots beta of f, up to lc(f)^{deg_y F}).
    let bound = df * bi.deg_t() + 1;
    let lead_y = &bi.y_coeffs[bi.deg_y()];
    let mut points = vec![];
    let mut values = vec![];
    let mut t = 0i64;
    while points.len() < bound {
        for cand in [t, -t] {
            if points.len() >= bound {
                break;
            }
            let tv = big(cand);
            if points.contains(&tv) {
                continue;
            }
            // keep the y-degree of F(t, .) stable so the specialized
            // resultant is the specialization of the generic one
            if lead_y.eval(&tv).is_zero() {
                continue;
            }
            let spec = bi.eval_t(&tv);
            let r = f.resultant(&spec);
            points.push(tv);
            values.push(r);
        }
        t += 1;
    }
    Ok(lagrange_interpolate(&points, &values))
}

fn lagrange_interpolate(xs: &[BigRational], ys: &[BigRational]) -> QPoly {
    // Newton's divided differences
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = &coef[i] - &coef[i - 1];
            let den = &xs[i] - &xs[i - j];
            coef[i] = num / den;
        }
    }
    // horner over nodes: p = c0 + (x-x0)(c1 + (x-x1)(...))
    let mut p = QPoly::constant(coef[n - 1].clone());
    for i in (0..n - 1).rev() {
        let shift = QPoly::from_coeffs(vec![-xs[i].clone(), BigRational::one()]);
        p = &(&p * &shift) + &QPoly::constant(coef[i].clone());
    }
    p
}

// ---- small prime utilities (u64 arithmetic, p < 2^31) ----

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // deterministic Miller-Rabin for u64
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if a % n == 0 {
            continue;
        }
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn next_prime(n: u64) -> u64 {
    let mut m = n + 1;
    while !is_prime_u64(m) {
        m += 1;
    }
    m
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

// ---- polynomial arithmetic mod p (ascending u64 coefficients) ----

pub(crate) fn modp_trim(mut a: Vec<u64>) -> Vec<u64> {
    while matches!(a.last(), Some(0)) {
        a.pop();
    }
    a
}

pub(crate) fn modp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    modp_trim(out)
}

pub(crate) fn modp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    assert!(!m.is_empty());
    let dm = m.len() - 1;
    let inv_lead = pow_mod(m[dm], p - 2, p);
    let mut r = a.to_vec();
    while r.len() > dm {
        let lr = *r.last().unwrap();
        if lr != 0 {
            let q = mul_mod(lr, inv_lead, p);
            let dr = r.len() - 1;
            for (j, &c) in m.iter().enumerate() {
                let idx = dr - dm + j;
                let sub = mul_mod(q, c, p);
                r[idx] = (r[idx] + p - sub) % p;
            }
        }
        r.pop();
        r = modp_trim(r);
    }
    modp_trim(r)
}

pub(crate) fn modp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = modp_trim(a.to_vec());
    let mut b = modp_trim(b.to_vec());
    while !b.is_empty() {
        let r = modp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    if a.is_empty() {
        return a;
    }
    // monic
    let inv = pow_mod(*a.last().unwrap(), p - 2, p);
    a.iter().map(|&c| mul_mod(c, inv, p)).collect()
}

pub(crate) fn modp_pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = modp_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = modp_rem(&modp_mul(&acc, &b, p), m, p);
        }
        b = modp_rem(&modp_mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

/// Degrees (with multiplicity in the count sense) of the irreducible factors
/// of the squarefree reduction of `f` mod p, by distinct-degree
/// factorization.  Caller must pick p with f mod p squarefree of full degree.
fn factor_degrees_mod_p(ints: &[BigInt], p: u64) -> Vec<usize> {
    let pb = BigInt::from(p);
    let mut f: Vec<u64> = ints
        .iter()
        .map(|c| {
            let r = ((c % &pb) + &pb) % &pb;
            let digits = r.to_u64_digits().1;
            digits.first().copied().unwrap_or(0)
        })
        .collect();
    f = modp_trim(f);
    let mut degs = vec![];
    let mut w = vec![0u64, 1]; // x
    let mut d = 0usize;
    while f.len() > 1 {
        d += 1;
        if 2 * d > f.len() - 1 {
            degs.push(f.len() - 1);
            break;
        }
        w = modp_pow_mod(&w, p, &f, p);
        // gcd(w - x, f)
        let mut wx = w.clone();
        if wx.len() < 2 {
            wx.resize(2, 0);
        }
        wx[1] = (wx[1] + p - 1) % p;
        let g = modp_gcd(&modp_trim(wx), &f, p);
        if g.len() > 1 {
            let factors = (g.len() - 1) / d;
            for _ in 0..factors {
                degs.push(d);
            }
            // f /= g
            let df = f.len() - 1;
            let dg = g.len() - 1;
            let mut q = vec![0u64; df - dg + 1];
            let mut r = f.clone();
            let inv = pow_mod(*g.last().unwrap(), p - 2, p);
            for i in (dg..=df).rev() {
                let c = mul_mod(r[i], inv, p);
                q[i - dg] = c;
                if c != 0 {
                    for (j, &gc) in g.iter().enumerate() {
                        let idx = i - dg + j;
                        let sub = mul_mod(c, gc, p);
                        r[idx] = (r[idx] + p - sub) % p;
                    }
                }
            }
            f = modp_trim(q);
            w = modp_rem(&w, &f, p);
        }
    }
    degs
}

// ---- full factorization over Q (Zassenhaus) ----

/// Monic irreducible factors of a squarefree monic polynomial mod p, by
/// distinct-degree factorization followed by Cantor-Zassenhaus splitting.
fn factor_mod_p(f: &[u64], p: u64, seed: &mut u64) -> Vec<Vec<u64>> {
    let mut out = vec![];
    let mut f = f.to_vec();
    let mut w = vec![0u64, 1]; // x^(p^d) mod f, updated per degree
    let mut d = 0usize;
    while f.len() > 1 {
        d += 1;
        if 2 * d > f.len() - 1 {
            out.push(f.clone());
            break;
        }
        w = modp_pow_mod(&w, p, &f, p);
        let mut wx = w.clone();
        if wx.len() < 2 {
            wx.resize(2, 0);
        }
        wx[1] = (wx[1] + p - 1) % p;
        let g = modp_gcd(&modp_trim(wx), &f, p);
        if g.len() > 1 {
            equal_degree_split(&g, d, p, seed, &mut out);
            let q = modp_div_exact(&f, &g, p);
            f = q;
            w = modp_rem(&w, &f, p);
        }
    }
    out
}

/// Split a monic product of distinct irreducibles of equal degree d.
fn equal_degree_split(h: &[u64], d: usize, p: u64, seed: &mut u64, out: &mut Vec<Vec<u64>>) {
    if h.len() - 1 == d {
        out.push(h.to_vec());
        return;
    }
    // exponent (p^d - 1)/2
    let e = (BigInt::from(p).pow(d as u32) - 1) / 2;
    loop {
        // deterministic pseudo-random polynomial of degree < deg h
        let a: Vec<u64> = (0..h.len() - 1)
            .map(|_| {
                *seed = seed
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                (*seed >> 33) % p
            })
            .collect();
        let a = modp_trim(a);
        if a.len() <= 1 {
            continue;
        }
        let g = modp_gcd(&a, h, p);
        if g.len() > 1 && g.len() < h.len() {
            equal_degree_split(&g, d, p, seed, out);
            equal_degree_split(&modp_div_exact(h, &g, p), d, p, seed, out);
            return;
        }
        let mut b = modp_pow_mod_bigexp(&a, &e, h, p);
        // b - 1
        if b.is_empty() {
            b = vec![p - 1];
        } else {
            b[0] = (b[0] + p - 1) % p;
            b = modp_trim(b);
        }
        let g = modp_gcd(&b, h, p);
        if g.len() > 1 && g.len() < h.len() {
            equal_degree_split(&g, d, p, seed, out);
            equal_degree_split(&modp_div_exact(h, &g, p), d, p, seed, out);
            return;
        }
    }
}

fn modp_div_exact(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let df = f.len() - 1;
    let dg = g.len() - 1;
    let inv = pow_mod(*g.last().unwrap(), p - 2, p);
    let mut q = vec![0u64; df - dg + 1];
    let mut r = f.to_vec();
    for i in (dg..=df).rev() {
        let c = mul_mod(r[i], inv, p);
        q[i - dg] = c;
        if c != 0 {
            for (j, &gc) in g.iter().enumerate() {
                let idx = i - dg + j;
                let sub = mul_mod(c, gc, p);
                r[idx] = (r[idx] + p - sub) % p;
            }
        }
    }
    modp_trim(q)
}

fn modp_pow_mod_bigexp(base: &[u64], e: &BigInt, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = modp_rem(base, m, p);
    let (_, digits) = e.to_u64_digits();
    let bits = e.bits();
    for i in 0..bits {
        if digits[(i / 64) as usize] >> (i % 64) & 1 == 1 {
            acc = modp_rem(&modp_mul(&acc, &b, p), m, p);
        }
        b = modp_rem(&modp_mul(&b, &b, p), m, p);
    }
    acc
}

// ---- arithmetic on polynomials with coefficients in Z/m (BigInt, in [0,m)) ----

fn zm_trim(mut a: Vec<BigInt>) -> Vec<BigInt> {
    while matches!(a.last(), Some(c) if c.is_zero()) {
        a.pop();
    }
    a
}

fn zm_red(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    zm_trim(a.iter().map(|c| ((c % m) + m) % m).collect())
}

fn zm_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zm_red(&out, m)
}

fn zm_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let out: Vec<BigInt> = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
        .collect();
    zm_red(&out, m)
}

fn zm_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let out: Vec<BigInt> = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
        .collect();
    zm_red(&out, m)
}

/// Division with remainder by a monic divisor, mod m.
fn zm_quorem(a: &[BigInt], g: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let dg = g.len() - 1;
    debug_assert!(g.last().unwrap().is_one());
    let mut r = a.to_vec();
    if r.len() <= dg {
        return (vec![], zm_trim(r));
    }
    let mut q = vec![BigInt::zero(); r.len() - dg];
    for i in (dg..r.len()).rev() {
        let c = r[i].clone();
        if !c.is_zero() {
            q[i - dg] = c.clone();
            for (j, gc) in g.iter().enumerate() {
                let v = (&r[i - dg + j] - &c * gc) % m;
                r[i - dg + j] = (v + m) % m;
            }
        }
        r.truncate(i);
    }
    (zm_trim(q), zm_trim(r))
}

/// One quadratic Hensel step: from f = g*h, s*g + t*h = 1 (mod m) to the
/// same congruences mod m^2.  h monic; returns (g, h, s, t).
#[allow(clippy::type_complexity)]
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
    let m2 = m * m;
    let e = zm_sub(&zm_red(f, &m2), &zm_mul(g, h, &m2), &m2);
    let (q, r) = zm_quorem(&zm_mul(s, &e, &m2), h, &m2);
    let gs = zm_add(&zm_add(g, &zm_mul(t, &e, &m2), &m2), &zm_mul(&q, g, &m2), &m2);
    let hs = zm_add(h, &r, &m2);
    let b = zm_sub(
        &zm_add(&zm_mul(s, &gs, &m2), &zm_mul(t, &hs, &m2), &m2),
        &[BigInt::one()],
        &m2,
    );
    let (c, d) = zm_quorem(&zm_mul(s, &b, &m2), &hs, &m2);
    let ss = zm_sub(s, &d, &m2);
    let ts = zm_sub(&zm_sub(t, &zm_mul(t, &b, &m2), &m2), &zm_mul(&c, &gs, &m2), &m2);
    (gs, hs, ss, ts)
}

/// Lift a two-factor splitting f = g0*h0 mod p (h0 monic) to mod p^2^j >= target.
#[allow(clippy::type_complexity)]
fn hensel_lift2(
    f: &[BigInt],
    g0: &[u64],
    h0: &[u64],
    p: u64,
    target: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>) {
    // Bezout mod p via extended euclid on u64 polys
    let (s0, t0) = modp_bezout(g0, h0, p);
    let to_big = |v: &[u64]| -> Vec<BigInt> { v.iter().map(|&c| BigInt::from(c)).collect() };
    let mut g = to_big(g0);
    let mut h = to_big(h0);
    let mut s = to_big(&s0);
    let mut t = to_big(&t0);
    let mut m = BigInt::from(p);
    while &m < target {
        let (gs, hs, ss, ts) = hensel_step(f, &g, &h, &s, &t, &m);
        g = gs;
        h = hs;
        s = ss;
        t = ts;
        m = &m * &m;
    }
    (g, h)
}

/// s, t with s*a + t*b = 1 mod p, for coprime a, b.
fn modp_bezout(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    // extended euclid tracking coefficients on a only, then solve for b's
    let mut r0 = modp_trim(a.to_vec());
    let mut r1 = modp_trim(b.to_vec());
    let mut s0 = vec![1u64];
    let mut s1: Vec<u64> = vec![];
    while !r1.is_empty() {
        let (q, r) = modp_quorem(&r0, &r1, p);
        let qs = modp_mul(&q, &s1, p);
        let ns = modp_sub(&s0, &qs, p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = ns;
    }
    // r0 = gcd = s0*a mod b (times unit); normalize to 1
    assert_eq!(r0.len(), 1, "factors must be coprime mod p");
    let inv = pow_mod(r0[0], p - 2, p);
    let s: Vec<u64> = s0.iter().map(|&c| mul_mod(c, inv, p)).collect();
    // t = (1 - s*a)/b
    let sa = modp_mul(&s, a, p);
    let one_minus = modp_sub(&[1], &sa, p);
    let (t, rem) = modp_quorem(&one_minus, b, p);
    assert!(rem.is_empty());
    (s, t)
}

fn modp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    modp_trim(out)
}

fn modp_quorem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (vec![], modp_trim(a.to_vec()));
    }
    let inv = pow_mod(*b.last().unwrap(), p - 2, p);
    let mut r = a.to_vec();
    let mut q = vec![0u64; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = mul_mod(r[i], inv, p);
        if c != 0 {
            q[i - db] = c;
            for (j, &bc) in b.iter().enumerate() {
                let sub = mul_mod(c, bc, p);
                r[i - db + j] = (r[i - db + j] + p - sub) % p;
            }
        }
        r.truncate(i);
    }
    (modp_trim(q), modp_trim(r))
}

/// Lift all modular factors of a monic squarefree F to mod p^2^j >= target,
/// recursively: lift (first, product of rest), then recurse into the rest.
fn hensel_lift_tree(
    f: &[BigInt],
    factors: &[Vec<u64>],
    p: u64,
    target: &BigInt,
    out: &mut Vec<Vec<BigInt>>,
) {
    if factors.len() == 1 {
        out.push(zm_red(f, target));
        return;
    }
    let g0 = &factors[0];
    let mut h0 = vec![1u64];
    for fac in &factors[1..] {
        h0 = modp_mul(&h0, fac, p);
    }
    let (g, h) = hensel_lift2(f, g0, &h0, p, target);
    out.push(zm_red(&g, target));
    hensel_lift_tree(&zm_red(&h, target), &factors[1..], p, target, out);
}

/// Center a residue mod m into (-m/2, m/2].
fn zm_center(c: &BigInt, m: &BigInt) -> BigInt {
    let half = m / 2;
    if c > &half {
        c - m
    } else {
        c.clone()
    }
}

/// Irreducible monic factors of a squarefree, primitive, monic F over Z,
/// of degree >= 1, by Zassenhaus recombination.
fn factor_monic_squarefree_z(f_in: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = int_deg(f_in);
    if n <= 1 {
        return vec![f_in.to_vec()];
    }
    // choose a prime keeping F squarefree, preferring few modular factors
    let disc = {
        let fq = QPoly::from_coeffs(f_in.iter().map(|c| BigRational::from(c.clone())).collect());
        let d = fq.discriminant().expect("squarefree input");
        d.numer().clone() * d.denom().clone()
    };
    let mut seed: u64 = 0x243f6a8885a308d3;
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut p = 2u64;
    let mut tried = 0;
    while tried < 5 {
        p = next_prime(p);
        if (&disc % BigInt::from(p)).is_zero() {
            continue;
        }
        tried += 1;
        let fp: Vec<u64> = f_in
            .iter()
            .map(|c| {
                let pb = BigInt::from(p);
                let r = ((c % &pb) + &pb) % &pb;
                r.to_u64_digits().1.first().copied().unwrap_or(0)
            })
            .collect();
        let factors = factor_mod_p(&modp_trim(fp), p, &mut seed);
        if factors.len() == 1 {
            return vec![f_in.to_vec()];
        }
        if best.as_ref().map(|(_, b)| factors.len() < b.len()).unwrap_or(true) {
            best = Some((p, factors));
        }
    }
    let (p, mod_factors) = best.expect("good primes exist");
    // Landau-Mignotte style bound on factor coefficients of a monic divisor
    let norm2: BigInt = f_in.iter().map(|c| c * c).sum();
    let norm = norm2.sqrt() + 1;
    let bound: BigInt = norm * BigInt::from(2).pow(n as u32 + 1);
    let target = &bound * 2 + 1;
    // lift modulus: the smallest repeated square p^2^j reaching the bound
    let mut modulus = BigInt::from(p);
    while modulus < target {
        modulus = &modulus * &modulus;
    }
    let mut lifted = vec![];
    hensel_lift_tree(&zm_red(f_in, &modulus), &mod_factors, p, &modulus, &mut lifted);

    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut f = f_in.to_vec();
    let mut out = vec![];
    let mut s = 1usize;
    'outer: while 2 * s <= remaining.len() {
        let combos: Vec<Vec<usize>> = combinations(&remaining, s);
        for combo in combos {
            let mut g = vec![BigInt::one()];
            for &i in &combo {
                g = zm_mul(&g, &lifted[i], &modulus);
            }
            let cand: Vec<BigInt> = g.iter().map(|c| zm_center(c, &modulus)).collect();
            if let Some(q) = int_div_exact_monic(&f, &cand) {
                out.push(cand);
                f = q;
                remaining.retain(|i| !combo.contains(i));
                continue 'outer;
            }
        }
        s += 1;
    }
    if int_deg(&f) > 0 {
        out.push(f);
    }
    out
}

fn combinations(items: &[usize], s: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    items.iter().copied().combinations(s).collect()
}

/// Exact division of integer polynomials with monic divisor; None if not
/// divisible over Z.
fn int_div_exact_monic(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    if b.is_empty() || !b.last().unwrap().is_one() {
        return None;
    }
    let db = b.len() - 1;
    if a.len() <= db {
        return None;
    }
    // cheap filter: constant terms must divide
    if !a[0].is_zero() && !b[0].is_zero() && !(&a[0] % &b[0]).is_zero() {
        return None;
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i].clone();
        if !c.is_zero() {
            q[i - db] = c.clone();
            for (j, bc) in b.iter().enumerate() {
                let v = &r[i - db + j] - &c * bc;
                r[i - db + j] = v;
            }
        }
        r.truncate(i);
    }
    if r.iter().all(|c| c.is_zero()) {
        Some(q)
    } else {
        None
    }
}

impl QPoly {
    /// Monic irreducible factors over Q with multiplicities.  The product
    /// of the factors (with multiplicity) times the leading coefficient
    /// reconstitutes the polynomial.
    pub fn factor(&self) -> Result<Vec<(QPoly, usize)>, PolyError> {
        let d = self.degree().ok_or(PolyError::ZeroPolynomial)?;
        if d == 0 {
            return Ok(vec![]);
        }
        let sf = self.squarefree_part()?;
        // monicize over Z: F(y) = lc^{m-1} * g(y/lc) for the primitive
        // integer model g of the squarefree part
        let ints = sf.primitive_int();
        let m = int_deg(&ints);
        let lc = ints.last().unwrap().clone();
        // coefficient of y^i is a_i * lc^{m-1-i}
        let monic: Vec<BigInt> = (0..=m)
            .map(|i| {
                if i == m {
                    BigInt::one()
                } else {
                    &ints[i] * lc.pow((m - 1 - i) as u32)
                }
            })
            .collect();
        let raw = factor_monic_squarefree_z(&monic);
        // map back: a factor G(y) corresponds to monic(G(lc * x))
        let lc_rat = BigRational::from(lc);
        let mut factors: Vec<QPoly> = raw
            .iter()
            .map(|g| {
                let gq = QPoly::from_coeffs(
                    g.iter().map(|c| BigRational::from(c.clone())).collect(),
                );
                gq.compose_linear(&lc_rat, &BigRational::zero()).monic()
            })
            .collect();
        factors.sort_by_key(|f| f.degree());
        // multiplicities by repeated exact division
        let mut rest = self.monic();
        let mut out = vec![];
        for fac in factors {
            let mut mult = 0usize;
            while fac.divides(&rest) {
                rest = rest.div_exact(&fac).expect("divides checked");
                mult += 1;
            }
            debug_assert!(mult >= 1);
            out.push((fac, mult));
        }
        debug_assert_eq!(rest.degree(), Some(0));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> QPoly {
        QPoly::from_ints(coeffs)
    }

    #[test]
    fn small_primality() {
        let primes: Vec<u64> = (2..200).filter(|&n| is_prime_u64(n)).collect();
        let sieve: Vec<u64> = (2u64..200)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        assert_eq!(primes, sieve);
    }

    #[test]
    fn factor_products_of_quadratics() {
        // (x^2-2)(x^2-3)(x^2-5)
        let f = &(&p(&[-2, 0, 1]) * &p(&[-3, 0, 1])) * &p(&[-5, 0, 1]);
        let factors = f.factor().unwrap();
        assert_eq!(factors.len(), 3);
        assert!(factors.iter().all(|(g, m)| g.degree() == Some(2) && *m == 1));
        let mut prod = QPoly::one();
        for (g, _) in &factors {
            prod = &prod * g;
        }
        assert_eq!(prod, f);
    }

    #[test]
    fn factor_with_multiplicity_and_lc() {
        // 6 (x-1)^2 (2x+3)
        let f = (&(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[3, 2])).scale(&big(3));
        let factors = f.factor().unwrap();
        assert_eq!(factors.len(), 2);
        let mut prod = QPoly::constant(f.leading());
        for (g, m) in &factors {
            for _ in 0..*m {
                prod = &prod * g;
            }
        }
        assert_eq!(prod, f);
    }

    #[test]
    fn factor_certifies_biquadratic() {
        // T^4 - 10 T^2 + 1 = minpoly of sqrt2 + sqrt3: irreducible but
        // never shows a 4-cycle pattern mod any prime
        let f = p(&[1, 0, -10, 0, 1]);
        let factors = f.factor().unwrap();
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].0, f);
    }

    #[test]
    fn factor_degree16_compositum_resolvent() {
        // minimal polynomial of 2^(1/4) + 3^(1/4): the resolvent
        // Res_x(x^4-2, f2(T-x)) of degree 16, irreducible over Q, with an
        // entangled-closure factor pattern the modular sieve cannot settle
        let f1 = p(&[-2, 0, 0, 0, 1]);
        let f2 = p(&[-3, 0, 0, 0, 1]);
        let bi = BiPoly::sub_cy_from_t(&f2, &big(1));
        let r = resultant_elim(&f1, &bi).unwrap().monic();
        assert_eq!(r.degree(), Some(16));
        assert_eq!(
            r.irreducible_over_q(12).unwrap(),
            Irreducibility::Irreducible
        );
        // same-field compositum: sqrt2 + sqrt8 has degree 2
        let g1 = p(&[-2, 0, 1]);
        let g2 = p(&[-8, 0, 1]);
        let bi = BiPoly::sub_cy_from_t(&g2, &big(1));
        let r = resultant_elim(&g1, &bi).unwrap().monic();
        let factors = r.squarefree_part().unwrap().factor().unwrap();
        assert!(factors.iter().all(|(g, _)| g.degree() == Some(2)));
    }

    #[test]
    fn squarefree_examples() {
        // (T-1)^2 (T+2) -> (T-1)(T+2)
        let f = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[2, 1]);
        assert_eq!(f.squarefree_part().unwrap(), &p(&[-1, 1]) * &p(&[2, 1]));
        // T^3 -> T
        assert_eq!(p(&[0, 0, 0, 1]).squarefree_part().unwrap(), p(&[0, 1]));
        // T^4 + 6T^2 + 9 -> T^2 + 3
        assert_eq!(
            p(&[9, 0, 6, 0, 1]).squarefree_part().unwrap(),
            p(&[3, 0, 1])
        );
        assert!(QPoly::zero().squarefree_part().is_err());
    }

    #[test]
    fn squarefree_idempotent() {
        let f = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[1, 0, 3, 1]);
        let sf = f.squarefree_part().unwrap();
        assert_eq!(sf.squarefree_part().unwrap(), sf);
        assert_eq!(sf.gcd(&sf.derivative()).degree(), Some(0));
    }

    #[test]
    fn resultant_elim_examples() {
        // f = y - a, F = T - y^2 -> T - a^2
        let f = p(&[-3, 1]);
        let r = resultant_elim(&f, &BiPoly::t_minus_y_pow(2)).unwrap();
        assert_eq!(r.monic(), p(&[-9, 1]));
        // f = y^2 - 2, F = T - y^2 -> (T-2)^2
        let f = p(&[-2, 0, 1]);
        let r = resultant_elim(&f, &BiPoly::t_minus_y_pow(2)).unwrap();
        assert_eq!(r.monic(), &p(&[-2, 1]) * &p(&[-2, 1]));
        // f = y^2 - 5y + 6, F = T - y^2 -> (T-4)(T-9)
        let f = p(&[6, -5, 1]);
        let r = resultant_elim(&f, &BiPoly::t_minus_y_pow(2)).unwrap();
        assert_eq!(r.monic(), &p(&[-4, 1]) * &p(&[-9, 1]));
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(QPoly::cyclotomic(1).unwrap(), p(&[-1, 1]));
        assert_eq!(QPoly::cyclotomic(4).unwrap(), p(&[1, 0, 1]));
        assert_eq!(QPoly::cyclotomic(6).unwrap(), p(&[1, -1, 1]));
        assert!(QPoly::cyclotomic(0).is_err());
    }

    #[test]
    fn cyclotomic_product_identity() {
        for n in 1..=200usize {
            let mut prod = QPoly::one();
            for d in 1..=n {
                if n % d == 0 {
                    prod = &prod * &QPoly::cyclotomic(d).unwrap();
                }
            }
            let xn1 = QPoly::monomial(n) - QPoly::one();
            assert_eq!(prod, xn1, "prod of cyclotomics for n={n}");
        }
    }

    #[test]
    fn irreducibility_examples() {
        assert_eq!(
            p(&[1, 0, 1]).irreducible_over_q(25).unwrap(),
            Irreducibility::Irreducible
        );
        assert_eq!(
            p(&[-1, 0, 1]).irreducible_over_q(25).unwrap(),
            Irreducibility::Reducible
        );
        // minimal polynomial of sqrt(2) + sqrt(3)
        assert_eq!(
            p(&[1, 0, -10, 0, 1]).irreducible_over_q(25).unwrap(),
            Irreducibility::Irreducible
        );
        assert!(p(&[9, 0, 6, 0, 1]).irreducible_over_q(25).is_err());
    }

    #[test]
    fn irreducible_never_claimed_with_rational_root() {
        // (T - 2)(T^2 + T + 1)(T^2 + 3)
        let f = &(&p(&[-2, 1]) * &p(&[1, 1, 1])) * &p(&[3, 0, 1]);
        assert_eq!(f.irreducible_over_q(25).unwrap(), Irreducibility::Reducible);
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(p(&[1, 0, 1]).discriminant().unwrap(), big(-4));
        assert_eq!(p(&[6, -5, 1]).discriminant().unwrap(), big(1));
        assert_eq!(p(&[0, -1, 0, 1]).discriminant().unwrap(), big(4));
        assert!(p(&[5]).discriminant().is_err());
    }

    #[test]
    fn resultant_multiplicativity() {
        let cases = [
            (p(&[1, 2, 1, 3]), p(&[-2, 0, 1]), p(&[4, 1])),
            (p(&[7, 1]), p(&[1, 1, 1]), p(&[2, -3, 0, 1])),
            (p(&[1, 0, 0, 2]), p(&[5, 1, 1]), p(&[-1, 4, 1])),
        ];
        for (f, g, h) in cases {
            let lhs = (&f * &g).resultant(&h);
            let rhs = f.resultant(&h) * g.resultant(&h);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn divrem_roundtrip() {
        let f = p(&[3, 1, -2, 0, 5]);
        let d = p(&[1, 2, 1]);
        let (q, r) = f.divrem(&d);
        assert_eq!(&(&q * &d) + &r, f);
        assert!(r.degree().unwrap_or(0) < d.degree().unwrap());
    }

    #[test]
    fn rational_roots_found() {
        // roots 2, -1/3
        let f = &p(&[-2, 1]) * &p(&[1, 3]);
        let roots = f.rational_roots();
        assert!(roots.contains(&big(2)));
        assert!(roots.contains(&bigfrac(-1, 3)));
        assert_eq!(roots.len(), 2);
    }
}
