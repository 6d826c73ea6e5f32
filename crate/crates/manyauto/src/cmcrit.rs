//! The complex-multiplication criterion via Frobenius eigenvalue ratios.
//!
//! For a good prime p of a curve quotient, the characteristic polynomial
//! g_p of Frobenius has minimal polynomial f_p; the prime is *very good*
//! when no ratio of distinct roots of f_p is a root of unity, which is
//! decided exactly through the ratio polynomial h(T) = prod (T - a_i/a_j)
//! and its cyclotomic divisors.  At very good primes the field
//! E = Q[T]/(f_p) embeds into the endomorphism algebra of the reduced
//! jacobian; if several very good primes produce irreducible, pairwise
//! linearly disjoint fields whose degree product exceeds twice the
//! dimension, the jacobian cannot have CM.
//!
//! [`verdict`] routes every catalog family to its decision method: the
//! two Fermat-quotient families and the twist family are CM by the
//! classical construction; five curves are CM by the vanishing of the
//! Streit inner product; five are non-CM by a non-integral j-invariant of
//! an elliptic quotient; the remaining five are non-CM by the Frobenius
//! product criterion applied to their quotient curves.

use crate::count::{count_points, good_prime, lpoly_from_counts, CountError, GFContext};
use crate::curves::{CurveError, CurveSpec};
use crate::numfield::NumFieldError;
use crate::poly::{big, resultant_elim, BiPoly, PolyError, QPoly};
use crate::quotient::{
    expected_quotient_genus, j_invariant_for, rational_quotient_poly, QuotientError,
};
use crate::streit::{sym2_inner_product, StreitError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CmError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("{0} is not a good prime for this model")]
    BadPrime(u64),
    #[error("counting over q = {0} exceeds the configured limit {1}")]
    QLimit(u64, u64),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no quotient model with rational coefficients for {0}")]
    NoRationalModel(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Streit(#[from] StreitError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    NumField(#[from] NumFieldError),
}

/// Remove the factor T^k (zero roots play no part in eigenvalue ratios).
fn strip_t(f: &QPoly) -> QPoly {
    let mut g = f.clone();
    while g.degree().map(|d| d > 0).unwrap_or(false) && g.coeff(0).is_zero() {
        g = g
            .div_exact(&QPoly::monomial(1))
            .expect("constant term vanishes");
    }
    g
}

/// The monic polynomial of degree r^2 whose roots are all ratios a_i/a_j
/// of the r roots of f, from Res_y(f(y), f(T y)) made monic.
pub fn ratio_poly(f: &QPoly) -> Result<QPoly, CmError> {
    let f = strip_t(f);
    let d = f.degree().ok_or(CmError::ZeroPolynomial)?;
    if d == 0 {
        return Ok(QPoly::one());
    }
    let bi = BiPoly::scale_y_by_t(&f);
    let r = resultant_elim(&f, &bi)?;
    Ok(r.monic())
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The exponent n0: the lcm of all n > 1 whose cyclotomic polynomial
/// divides the ratio polynomial of f (1 when no ratio of roots is a root
/// of unity other than trivially).
pub fn n0_of(f: &QPoly) -> Result<u64, CmError> {
    let h = ratio_poly(f)?;
    let d = h.deg_or0() as u64;
    if d == 0 {
        return Ok(1);
    }
    let mut l: u64 = 1;
    // phi(n) > sqrt(n) for n > 6, so phi(n) <= d forces n <= max(6, d^2)
    let bound = (d * d).max(6);
    for n in 2..=bound {
        if euler_phi(n) > d {
            continue;
        }
        let phi_n = QPoly::cyclotomic(n as usize)?;
        if phi_n.divides(&h) {
            l = l.lcm(&n);
        }
    }
    Ok(l)
}

/// The characteristic polynomial k of t^{n0} on E_f and its squarefree
/// part g; E'_f = Q[t^{n0}] is isomorphic to Q[T]/(g).
pub fn eprime_poly(f: &QPoly) -> Result<(QPoly, QPoly), CmError> {
    let fs = strip_t(f);
    fs.degree().ok_or(CmError::ZeroPolynomial)?;
    let n0 = n0_of(&fs)?;
    let bi = BiPoly::t_minus_y_pow(n0 as usize);
    let k = resultant_elim(&fs, &bi)?.monic();
    let g = k.squarefree_part()?;
    Ok((k, g))
}

/// Whether E'_f = E_f: no ratio of distinct nonzero roots is a root of
/// unity, i.e. n0 = 1 after stripping zero roots.
pub fn is_very_good(f: &QPoly) -> Result<bool, CmError> {
    if !f.is_squarefree() {
        return Err(CmError::NotSquarefree);
    }
    let fs = strip_t(f);
    if fs.deg_or0() == 0 {
        return Ok(true);
    }
    Ok(n0_of(&fs)? == 1)
}

/// Minimal polynomial of t^k in Q[T]/(f) (f squarefree): the squarefree
/// part of Res_y(f(y), T - y^k).
pub fn power_minpoly(f: &QPoly, k: usize) -> Result<QPoly, CmError> {
    let bi = BiPoly::t_minus_y_pow(k);
    let r = resultant_elim(f, &bi)?.monic();
    Ok(r.squarefree_part()?)
}

fn certified_irreducible(f: &QPoly) -> Result<bool, CmError> {
    let d = f.degree().ok_or(CmError::ZeroPolynomial)?;
    if d == 0 {
        return Ok(false);
    }
    let factors = f.factor()?;
    Ok(factors.len() == 1 && factors[0].1 == 1 && factors[0].0.deg_or0() == d)
}

/// Degree of the compositum of Q[T]/(f1) and Q[T]/(f2), certified through
/// a primitive element a + c b for a shift c <= 10; None when no shift
/// certifies a degree.
pub fn compositum_degree(f1: &QPoly, f2: &QPoly) -> Result<Option<usize>, CmError> {
    if !certified_irreducible(f1)? || !certified_irreducible(f2)? {
        return Err(CmError::NotIrreducible);
    }
    let d1 = f1.deg_or0();
    let d2 = f2.deg_or0();
    let full = d1 * d2;
    let lcm = d1.lcm(&d2);
    let mut fallback: Option<usize> = None;
    let mut consistent = true;
    for c in 1..=10i64 {
        let bi = BiPoly::sub_cy_from_t(f2, &big(c));
        let r = resultant_elim(f1, &bi)?;
        let s = r.squarefree_part()?;
        if s.deg_or0() == full && certified_irreducible(&s)? {
            return Ok(Some(full));
        }
        // For a generic shift the irreducible factors of s are the minimal
        // polynomials of a + c*b over the embeddings; when they all share
        // one degree, that degree is the compositum degree.
        let degs: std::collections::BTreeSet<usize> =
            s.factor()?.iter().map(|(g, _)| g.deg_or0()).collect();
        if degs.len() == 1 {
            let ds = *degs.iter().next().unwrap();
            if ds == full {
                return Ok(Some(full));
            }
            if ds % lcm == 0 {
                match fallback {
                    None => fallback = Some(ds),
                    Some(v) if v != ds => consistent = false,
                    _ => {}
                }
            }
        }
    }
    Ok(if consistent { fallback } else { None })
}

/// Everything derived from one (quotient, prime) pair.
#[derive(Debug, Clone)]
pub struct FrobeniusData {
    pub id: String,
    pub p: u64,
    pub counts: Vec<u64>,
    /// Characteristic polynomial g_p of Frobenius, degree 2g.
    pub charpoly: QPoly,
    /// Minimal polynomial f_p = squarefree part of g_p.
    pub minpoly: QPoly,
    pub very_good: bool,
    pub irreducible: bool,
    /// [E_{f_p} : Q] = deg f_p.
    pub degree: usize,
}

impl FrobeniusData {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "id": self.id,
            "p": self.p,
            "counts": self.counts,
            "charpoly": poly_ints(&self.charpoly),
            "minpoly": poly_ints(&self.minpoly),
            "very_good": self.very_good,
            "irreducible": self.irreducible,
            "degree": self.degree,
        })
    }
}

fn poly_ints(f: &QPoly) -> Vec<String> {
    f.coeffs().iter().map(|c| c.to_string()).collect()
}

/// Hooks into the counting loop: progress display and an external count
/// store (cache).  All methods default to no-ops.
pub trait CountObserver {
    fn progress(&mut self, _p: u64, _k: usize, _q: u64) {}
    fn lookup(&mut self, _p: u64, _k: usize) -> Option<u64> {
        None
    }
    fn store(&mut self, _p: u64, _k: usize, _n: u64) {}
}

/// The do-nothing observer.
pub struct NoObserver;
impl CountObserver for NoObserver {}

struct ProgressObserver<F: FnMut(u64, usize, u64)>(F);
impl<F: FnMut(u64, usize, u64)> CountObserver for ProgressObserver<F> {
    fn progress(&mut self, p: u64, k: usize, q: u64) {
        (self.0)(p, k, q)
    }
}

/// Count points over F_p, ..., F_{p^g} for the quotient model and derive
/// the Frobenius data.  `progress` receives (k, q) before each count.
pub fn frobenius_at_prime_with<F>(
    id: &str,
    fbar: &QPoly,
    gbar: usize,
    p: u64,
    qlimit: u64,
    mut progress: F,
) -> Result<FrobeniusData, CmError>
where
    F: FnMut(usize, u64),
{
    let mut obs = ProgressObserver(move |_, k, q| progress(k, q));
    frobenius_at_prime_obs(id, fbar, gbar, p, qlimit, &mut obs)
}

/// As [`frobenius_at_prime_with`], with full observer hooks.
pub fn frobenius_at_prime_obs(
    id: &str,
    fbar: &QPoly,
    gbar: usize,
    p: u64,
    qlimit: u64,
    obs: &mut dyn CountObserver,
) -> Result<FrobeniusData, CmError> {
    if !good_prime(fbar, p) {
        return Err(CmError::BadPrime(p));
    }
    if let Some(q) = p.checked_pow(gbar as u32) {
        if q > qlimit {
            return Err(CmError::QLimit(q, qlimit));
        }
    } else {
        return Err(CmError::QLimit(u64::MAX, qlimit));
    }
    let mut counts = Vec::with_capacity(gbar);
    for k in 1..=gbar {
        let q = p.pow(k as u32);
        if let Some(n) = obs.lookup(p, k) {
            counts.push(n);
            continue;
        }
        obs.progress(p, k, q);
        let ctx = GFContext::new(p, k)?;
        let n = count_points(fbar, &ctx)?;
        obs.store(p, k, n);
        counts.push(n);
    }
    let charpoly = lpoly_from_counts(&counts, p, gbar)?;
    let minpoly = charpoly.squarefree_part()?;
    let very_good = is_very_good(&minpoly)?;
    let irreducible = certified_irreducible(&minpoly)?;
    let degree = minpoly.deg_or0();
    Ok(FrobeniusData {
        id: id.to_string(),
        p,
        counts,
        charpoly,
        minpoly,
        very_good,
        irreducible,
        degree,
    })
}

pub fn frobenius_at_prime(
    id: &str,
    fbar: &QPoly,
    gbar: usize,
    p: u64,
    qlimit: u64,
) -> Result<FrobeniusData, CmError> {
    frobenius_at_prime_with(id, fbar, gbar, p, qlimit, |_, _| {})
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Cm,
    NoCm,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Cm => "CM",
            Verdict::NoCm => "no-CM",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Streit,
    JInvariant,
    Frobenius,
    Cited,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Streit => "streit",
            Method::JInvariant => "j-invariant",
            Method::Frobenius => "frobenius",
            Method::Cited => "cited(Fermat-quotient)",
        }
    }
}

/// Result of the product criterion over a set of Frobenius data.
#[derive(Debug, Clone)]
pub struct ProductOutcome {
    pub verdict: Verdict,
    /// (p_i, p_j, certified compositum degree) for each pair.
    pub compositum: Vec<(u64, u64, usize)>,
    pub product: u128,
    /// 2 * quotient genus.
    pub bound: u128,
    pub diagnostics: Vec<String>,
}

/// The product criterion: very good primes with irreducible, pairwise
/// linearly disjoint minimal polynomials and degree product exceeding
/// twice the quotient genus rule out CM.
pub fn cm_product_test(gbar: usize, data: &[FrobeniusData]) -> Result<ProductOutcome, CmError> {
    let bound = 2 * gbar as u128;
    let mut diagnostics = vec![];
    let mut outcome = ProductOutcome {
        verdict: Verdict::Inconclusive,
        compositum: vec![],
        product: 1,
        bound,
        diagnostics: vec![],
    };
    if data.is_empty() {
        outcome.diagnostics.push("no primes supplied".into());
        return Ok(outcome);
    }
    for d in data {
        if !d.very_good {
            return Err(CmError::Precondition(format!("p = {} is not very good", d.p)));
        }
        if !d.irreducible {
            return Err(CmError::Precondition(format!(
                "f_p at p = {} is not irreducible",
                d.p
            )));
        }
    }
    let mut all_disjoint = true;
    for i in 0..data.len() {
        for j in i + 1..data.len() {
            let full = data[i].degree * data[j].degree;
            match compositum_degree(&data[i].minpoly, &data[j].minpoly)? {
                Some(deg) if deg == full => {
                    outcome.compositum.push((data[i].p, data[j].p, deg));
                }
                other => {
                    all_disjoint = false;
                    diagnostics.push(format!(
                        "primes {} and {}: disjointness not certified (got {:?}, need {})",
                        data[i].p, data[j].p, other, full
                    ));
                }
            }
        }
    }
    outcome.product = data.iter().map(|d| d.degree as u128).product();
    if all_disjoint && outcome.product > bound {
        outcome.verdict = Verdict::NoCm;
    } else if all_disjoint {
        diagnostics.push(format!(
            "product of degrees {} does not exceed {}",
            outcome.product, bound
        ));
    }
    outcome.diagnostics = diagnostics;
    Ok(outcome)
}

/// Evidence backing a verdict, machine-checkable per method.
#[derive(Debug, Clone)]
pub enum Evidence {
    Streit {
        inner_product: BigRational,
    },
    JInvariant {
        j_text: String,
        minpoly: QPoly,
        integral: bool,
    },
    Frobenius {
        data: Vec<FrobeniusData>,
        outcome: ProductOutcome,
        /// Some f_p irreducible of full degree 2g: the quotient jacobian
        /// is simple.
        simple: bool,
        notes: Vec<String>,
    },
    Cited {
        note: String,
    },
    Failure {
        note: String,
    },
}

#[derive(Debug, Clone)]
pub struct CMVerdict {
    pub id: String,
    pub verdict: Verdict,
    pub method: Method,
    pub evidence: Evidence,
}

impl CMVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        let evidence = match &self.evidence {
            Evidence::Streit { inner_product } => serde_json::json!({
                "inner_product": inner_product.to_string(),
            }),
            Evidence::JInvariant {
                j_text,
                minpoly,
                integral,
            } => serde_json::json!({
                "j": j_text,
                "j_minpoly": poly_ints(minpoly),
                "integral": integral,
            }),
            Evidence::Frobenius {
                data,
                outcome,
                simple,
                notes,
            } => serde_json::json!({
                "primes": data.iter().map(|d| d.to_json()).collect::<Vec<_>>(),
                "compositum": outcome
                    .compositum
                    .iter()
                    .map(|(a, b, d)| serde_json::json!([a, b, d]))
                    .collect::<Vec<_>>(),
                "product": outcome.product.to_string(),
                "bound": outcome.bound.to_string(),
                "diagnostics": outcome.diagnostics,
                "jacobian_simple": simple,
                "notes": notes,
            }),
            Evidence::Cited { note } => serde_json::json!({ "note": note }),
            Evidence::Failure { note } => serde_json::json!({ "error": note }),
        };
        serde_json::json!({
            "id": self.id,
            "verdict": self.verdict.as_str(),
            "method": self.method.as_str(),
            "evidence": evidence,
        })
    }
}

/// Options for the Frobenius routing.
#[derive(Debug, Clone)]
pub struct FrobeniusOptions {
    /// Explicit primes; None selects the per-curve defaults.
    pub primes: Option<Vec<u64>>,
    /// Search further odd good primes when the defaults do not certify.
    pub auto: bool,
    /// Maximum number of primes examined during a search.
    pub budget: usize,
    /// Largest field size q = p^g allowed for counting.
    pub qlimit: u64,
}

impl Default for FrobeniusOptions {
    fn default() -> Self {
        FrobeniusOptions {
            primes: None,
            auto: false,
            budget: 25,
            qlimit: 1_000_000_000,
        }
    }
}

/// The reference primes for the Frobenius-routed curves.  X18 has none:
/// its reference primes 131 and 211 need fields of ~5*10^12 elements, so
/// substitutes are searched among odd good primes <= 31.
pub fn default_primes(id: &str) -> Option<&'static [u64]> {
    Some(match id {
        "X10" => &[37, 61, 157],
        "X11" => &[7, 73],
        "X16" => &[31, 151],
        "X17" => &[31, 41],
        "X18" => &[],
        _ => return None,
    })
}

const X18_SEARCH_LIMIT: u64 = 31;

/// Assemble the Frobenius evidence for one curve id, from the given or
/// default primes, optionally searching further primes.
pub fn frobenius_evidence(
    id: &str,
    opts: &FrobeniusOptions,
) -> Result<(Verdict, Evidence), CmError> {
    frobenius_evidence_with(id, opts, |_, _, _| {})
}

/// As [`frobenius_evidence`]; `progress` receives (p, k, q) before each
/// field is counted.
pub fn frobenius_evidence_with<F>(
    id: &str,
    opts: &FrobeniusOptions,
    progress: F,
) -> Result<(Verdict, Evidence), CmError>
where
    F: FnMut(u64, usize, u64),
{
    frobenius_evidence_obs(id, opts, &mut ProgressObserver(progress))
}

/// As [`frobenius_evidence`], with full observer hooks.
pub fn frobenius_evidence_obs(
    id: &str,
    opts: &FrobeniusOptions,
    obs: &mut dyn CountObserver,
) -> Result<(Verdict, Evidence), CmError> {
    let fbar = rational_quotient_poly(id).ok_or_else(|| CmError::NoRationalModel(id.into()))?;
    let gbar = expected_quotient_genus(id).ok_or_else(|| CmError::NoRationalModel(id.into()))?;
    let bound = 2 * gbar as u128;
    let mut notes = vec![];
    let mut data: Vec<FrobeniusData> = vec![];
    let mut examined = 0usize;

    let explicit: Vec<u64> = match (&opts.primes, default_primes(id)) {
        (Some(ps), _) => ps.clone(),
        (None, Some(ps)) => ps.to_vec(),
        (None, None) => vec![],
    };
    if id == "X18" && opts.primes.is_none() {
        notes.push(
            "reference primes 131 and 211 require counting over ~5*10^12 field elements \
             and are out of desk scale; substitutes are searched among odd good primes <= 31"
                .into(),
        );
    }
    for &p in &explicit {
        examined += 1;
        match frobenius_at_prime_obs(id, &fbar, gbar, p, opts.qlimit, obs) {
            Ok(d) => {
                if d.very_good && d.irreducible {
                    data.push(d);
                } else {
                    notes.push(format!(
                        "p = {}: skipped (very_good = {}, irreducible = {})",
                        p, d.very_good, d.irreducible
                    ));
                }
            }
            Err(e) => notes.push(format!("p = {p}: {e}")),
        }
    }
    let auto_search = opts.auto || (id == "X18" && opts.primes.is_none());
    if auto_search {
        let limit = if id == "X18" { X18_SEARCH_LIMIT } else { u64::MAX };
        let mut p = 3;
        while examined < opts.budget && p <= limit {
            let enough = data.iter().map(|d| d.degree as u128).product::<u128>() > bound
                && data.len() >= 2;
            if enough {
                break;
            }
            if explicit.contains(&p) || !good_prime(&fbar, p) {
                p = crate::poly::next_prime(p);
                continue;
            }
            examined += 1;
            match frobenius_at_prime_obs(id, &fbar, gbar, p, opts.qlimit, obs) {
                Ok(d) => {
                    if !(d.very_good && d.irreducible) {
                        notes.push(format!(
                            "p = {}: skipped (very_good = {}, irreducible = {})",
                            p, d.very_good, d.irreducible
                        ));
                    } else {
                        // keep only primes certified pairwise disjoint from
                        // the ones already kept; a non-disjoint pair can
                        // never be repaired by adding more primes
                        let mut disjoint = true;
                        for e in &data {
                            let full = e.degree * d.degree;
                            if compositum_degree(&e.minpoly, &d.minpoly)? != Some(full) {
                                disjoint = false;
                                notes.push(format!(
                                    "p = {}: skipped (not certified disjoint from p = {})",
                                    p, e.p
                                ));
                                break;
                            }
                        }
                        if disjoint {
                            data.push(d);
                        }
                    }
                }
                Err(e) => notes.push(format!("p = {p}: {e}")),
            }
            p = crate::poly::next_prime(p);
        }
    }
    let outcome = cm_product_test(gbar, &data)?;
    let simple = data.iter().any(|d| d.irreducible && d.degree == 2 * gbar);
    if simple {
        notes.push("some f_p is irreducible of degree 2g: the quotient jacobian is simple".into());
    }
    let verdict = outcome.verdict;
    Ok((
        verdict,
        Evidence::Frobenius {
            data,
            outcome,
            simple,
            notes,
        },
    ))
}

/// The CM verdict for one catalog curve, routed per family.  Failure of
/// any stage yields an inconclusive verdict with diagnostics, never a
/// false claim.
pub fn verdict(curve: &CurveSpec, opts: &FrobeniusOptions) -> CMVerdict {
    verdict_with(curve, opts, |_, _, _| {})
}

pub fn verdict_with<F>(curve: &CurveSpec, opts: &FrobeniusOptions, progress: F) -> CMVerdict
where
    F: FnMut(u64, usize, u64),
{
    verdict_obs(curve, opts, &mut ProgressObserver(progress))
}

/// As [`verdict`], with full observer hooks.
pub fn verdict_obs(
    curve: &CurveSpec,
    opts: &FrobeniusOptions,
    obs: &mut dyn CountObserver,
) -> CMVerdict {
    let id = curve.id.as_str();
    match id {
        "X1" | "X2" | "X3" => CMVerdict {
            id: id.to_string(),
            verdict: Verdict::Cm,
            method: Method::Cited,
            evidence: Evidence::Cited {
                note: "quotient of a Fermat curve (X1, X2) or twist (X3); \
                       the jacobian is a CM abelian variety by the classical construction"
                    .into(),
            },
        },
        "X4" | "X5" | "X7" | "X9" | "X14" => match sym2_inner_product(curve) {
            Ok(v) => {
                let verdict = if v.is_zero() {
                    Verdict::Cm
                } else {
                    Verdict::Inconclusive
                };
                CMVerdict {
                    id: id.to_string(),
                    verdict,
                    method: Method::Streit,
                    evidence: Evidence::Streit { inner_product: v },
                }
            }
            Err(e) => failure(id, Method::Streit, e.to_string()),
        },
        "X6" | "X8" | "X12" | "X13" | "X15" => match j_invariant_for(id) {
            Ok(j) => {
                let integral = j.is_algebraic_integer();
                CMVerdict {
                    id: id.to_string(),
                    verdict: if integral {
                        Verdict::Inconclusive
                    } else {
                        Verdict::NoCm
                    },
                    method: Method::JInvariant,
                    evidence: Evidence::JInvariant {
                        j_text: format!("{j:?}"),
                        minpoly: j.minimal_polynomial(),
                        integral,
                    },
                }
            }
            Err(e) => failure(id, Method::JInvariant, e.to_string()),
        },
        "X10" | "X11" | "X16" | "X17" | "X18" => {
            match frobenius_evidence_obs(id, opts, obs) {
                Ok((verdict, evidence)) => CMVerdict {
                    id: id.to_string(),
                    verdict,
                    method: Method::Frobenius,
                    evidence,
                },
                Err(e) => failure(id, Method::Frobenius, e.to_string()),
            }
        }
        other => failure(other, Method::Cited, "unknown curve id".into()),
    }
}

fn failure(id: &str, method: Method, note: String) -> CMVerdict {
    CMVerdict {
        id: id.to_string(),
        verdict: Verdict::Inconclusive,
        method,
        evidence: Evidence::Failure { note },
    }
}

// ---- numerical cross-check for is_very_good ----

/// Fixed-precision complex arithmetic on rationals: every product is
/// truncated to `bits` fractional bits to keep sizes bounded.
#[derive(Clone, Debug)]
struct Cx {
    re: BigRational,
    im: BigRational,
    bits: u32,
}

fn trunc(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = x * BigRational::from(scale.clone());
    BigRational::new(scaled.to_integer(), scale)
}

impl Cx {
    fn new(re: BigRational, im: BigRational, bits: u32) -> Cx {
        Cx {
            re: trunc(&re, bits),
            im: trunc(&im, bits),
            bits,
        }
    }

    fn from_rational(r: &BigRational, bits: u32) -> Cx {
        Cx::new(r.clone(), BigRational::zero(), bits)
    }

    fn add(&self, o: &Cx) -> Cx {
        Cx::new(&self.re + &o.re, &self.im + &o.im, self.bits)
    }

    fn sub(&self, o: &Cx) -> Cx {
        Cx::new(&self.re - &o.re, &self.im - &o.im, self.bits)
    }

    fn mul(&self, o: &Cx) -> Cx {
        Cx::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
            self.bits,
        )
    }

    fn div(&self, o: &Cx) -> Cx {
        let n = &o.re * &o.re + &o.im * &o.im;
        Cx::new(
            (&self.re * &o.re + &self.im * &o.im) / &n,
            (&self.im * &o.re - &self.re * &o.im) / &n,
            self.bits,
        )
    }

    fn norm2(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

fn eval_cx(f: &QPoly, z: &Cx) -> Cx {
    let mut acc = Cx::from_rational(&BigRational::zero(), z.bits);
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(z).add(&Cx::from_rational(c, z.bits));
    }
    acc
}

/// All complex roots of a squarefree polynomial by the Durand-Kerner
/// iteration at the given precision.
fn roots_numeric(f: &QPoly, bits: u32) -> Vec<Cx> {
    let f = f.monic();
    let d = f.deg_or0();
    if d == 0 {
        return vec![];
    }
    // starting points on a generic spiral
    let seed = Cx::new(bigfrac_local(4, 10), bigfrac_local(9, 10), bits);
    let mut zs: Vec<Cx> = Vec::with_capacity(d);
    let mut acc = Cx::from_rational(&BigRational::one(), bits);
    for _ in 0..d {
        acc = acc.mul(&seed);
        zs.push(acc.clone());
    }
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (2 * bits - 40));
    for _ in 0..400 {
        let mut delta = BigRational::zero();
        for i in 0..d {
            let mut den = Cx::from_rational(&BigRational::one(), bits);
            for j in 0..d {
                if j != i {
                    den = den.mul(&zs[i].sub(&zs[j]));
                }
            }
            let step = eval_cx(&f, &zs[i]).div(&den);
            let n = step.norm2();
            if n > delta {
                delta = n.clone();
            }
            zs[i] = zs[i].sub(&step);
        }
        if delta < eps {
            break;
        }
    }
    zs
}

fn bigfrac_local(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Numerical oracle for [`is_very_good`]: find the roots at high
/// precision and test every ratio of distinct roots against all roots of
/// unity of order up to deg(h)^2.  Intended as a cross-check only.
pub fn very_good_numeric_oracle(f: &QPoly, bits: u32) -> Result<bool, CmError> {
    if !f.is_squarefree() {
        return Err(CmError::NotSquarefree);
    }
    let fs = strip_t(f);
    let d = fs.deg_or0();
    if d <= 1 {
        return Ok(true);
    }
    let zs = roots_numeric(&fs, bits);
    let tol = BigRational::new(BigInt::one(), BigInt::one() << 60);
    let max_order = (d * d) * (d * d);
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            let r = zs[i].div(&zs[j]);
            // a root of unity lies on the unit circle
            if (r.norm2() - BigRational::one()).abs() > tol {
                continue;
            }
            let one = Cx::from_rational(&BigRational::one(), r.bits);
            let mut pw = one.clone();
            for _ in 1..=max_order {
                pw = pw.mul(&r);
                if pw.sub(&one).norm2() < tol {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::curve_by_id;
    use crate::poly::bigfrac;

    #[test]
    fn ratio_poly_examples() {
        // single root: only the trivial ratio
        let h = ratio_poly(&QPoly::from_ints(&[-2, 1])).unwrap();
        assert_eq!(h, QPoly::from_ints(&[-1, 1]));
        // roots {2, 3}: ratios {1, 1, 3/2, 2/3}
        let h2 = ratio_poly(&QPoly::from_ints(&[6, -5, 1])).unwrap();
        let expect = &(&QPoly::from_ints(&[-1, 1]) * &QPoly::from_ints(&[-1, 1]))
            * &(&QPoly::from_coeffs(vec![bigfrac(-3, 2), big(1)])
                * &QPoly::from_coeffs(vec![bigfrac(-2, 3), big(1)]));
        assert_eq!(h2, expect);
        // roots +/- i sqrt(3): ratios {1, 1, -1, -1}
        let h3 = ratio_poly(&QPoly::from_ints(&[3, 0, 1])).unwrap();
        let expect3 = &(&QPoly::from_ints(&[-1, 1]) * &QPoly::from_ints(&[-1, 1]))
            * &(&QPoly::from_ints(&[1, 1]) * &QPoly::from_ints(&[1, 1]));
        assert_eq!(h3, expect3);
    }

    #[test]
    fn n0_examples() {
        assert_eq!(n0_of(&QPoly::from_ints(&[6, -5, 1])).unwrap(), 1);
        assert_eq!(n0_of(&QPoly::from_ints(&[3, 0, 1])).unwrap(), 2);
        assert_eq!(n0_of(&QPoly::from_ints(&[1, 0, 1])).unwrap(), 2);
    }

    #[test]
    fn eprime_examples() {
        // (+/- i)^2 = -1
        let (k, g) = eprime_poly(&QPoly::from_ints(&[1, 0, 1])).unwrap();
        assert_eq!(k, &QPoly::from_ints(&[1, 1]) * &QPoly::from_ints(&[1, 1]));
        assert_eq!(g, QPoly::from_ints(&[1, 1]));
        // very good case: E' = E
        let f = QPoly::from_ints(&[6, -5, 1]);
        let (_, g2) = eprime_poly(&f).unwrap();
        assert_eq!(g2, f);
        // both roots of T^2 - 2 square to 2
        let (_, g3) = eprime_poly(&QPoly::from_ints(&[-2, 0, 1])).unwrap();
        assert_eq!(g3, QPoly::from_ints(&[-2, 1]));
    }

    #[test]
    fn very_good_examples() {
        assert!(is_very_good(&QPoly::from_ints(&[6, -5, 1])).unwrap());
        assert!(!is_very_good(&QPoly::from_ints(&[3, 0, 1])).unwrap());
        // a zero root is stripped first
        assert!(is_very_good(&QPoly::from_ints(&[0, 6, -5, 1])).unwrap());
    }

    #[test]
    fn compositum_examples() {
        let f1 = QPoly::from_ints(&[-2, 0, 1]);
        let f2 = QPoly::from_ints(&[-3, 0, 1]);
        assert_eq!(compositum_degree(&f1, &f2).unwrap(), Some(4));
        // same field Q(sqrt 2)
        let f3 = QPoly::from_ints(&[-8, 0, 1]);
        assert_eq!(compositum_degree(&f1, &f3).unwrap(), Some(2));
        // compositum with Q
        let lin = QPoly::from_ints(&[-1, 1]);
        let quart = QPoly::from_ints(&[-2, 0, 0, 0, 1]);
        assert_eq!(compositum_degree(&lin, &quart).unwrap(), Some(4));
    }

    #[test]
    fn x10_frobenius_at_37() {
        let fbar = rational_quotient_poly("X10").unwrap();
        let d = frobenius_at_prime("X10", &fbar, 2, 37, 1_000_000_000).unwrap();
        assert!(d.very_good);
        assert!(d.irreducible);
        // g_37 = (T^2 + 6T + 37)^2, verified by independent point counts
        assert_eq!(d.degree, 2);
        assert_eq!(d.minpoly, QPoly::from_ints(&[37, 6, 1]));
    }

    #[test]
    fn x10_product_test_two_primes() {
        let fbar = rational_quotient_poly("X10").unwrap();
        let data: Vec<FrobeniusData> = [37u64, 61, 157]
            .iter()
            .map(|&p| frobenius_at_prime("X10", &fbar, 2, p, 1_000_000_000).unwrap())
            .collect();
        let out = cm_product_test(2, &data).unwrap();
        assert_eq!(out.verdict, Verdict::NoCm);
        assert_eq!(out.product, 8);
        // two quadratic primes only reach the bound, not beyond it
        let two = cm_product_test(2, &data[..2]).unwrap();
        assert_eq!(two.verdict, Verdict::Inconclusive);
        // empty list is inconclusive
        let empty = cm_product_test(2, &[]).unwrap();
        assert_eq!(empty.verdict, Verdict::Inconclusive);
        // a single prime cannot beat the bound when its degree is small
        let small = cm_product_test(8, &data[..1]).unwrap();
        assert_eq!(small.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn stability_of_eprime() {
        for f in [
            QPoly::from_ints(&[1, 0, 1]),
            QPoly::from_ints(&[-2, 0, 1]),
            QPoly::from_ints(&[6, -5, 1]),
            QPoly::from_ints(&[1, 1, 1, 1]),
        ] {
            let fs = strip_t(&f);
            let n0 = n0_of(&fs).unwrap() as usize;
            let (_, g) = eprime_poly(&fs).unwrap();
            for m in 1..=5 {
                let mp = power_minpoly(&fs, n0 * m).unwrap();
                assert_eq!(mp.deg_or0(), g.deg_or0(), "{f:?} at m = {m}");
            }
        }
    }

    #[test]
    fn numeric_oracle_agrees_on_examples() {
        for (f, expect) in [
            (QPoly::from_ints(&[6, -5, 1]), true),
            (QPoly::from_ints(&[3, 0, 1]), false),
            (QPoly::from_ints(&[1, 0, 1]), false),
            (QPoly::from_ints(&[-2, 0, 1]), false),
            (QPoly::from_ints(&[1, 1, 1]), false),
            (QPoly::from_ints(&[-1, 3, 1]), true),
        ] {
            assert_eq!(is_very_good(&f).unwrap(), expect, "exact {f:?}");
            assert_eq!(
                very_good_numeric_oracle(&f, 200).unwrap(),
                expect,
                "numeric {f:?}"
            );
        }
    }

    #[test]
    fn verdict_streit_and_j_rows() {
        let opts = FrobeniusOptions::default();
        let x14 = verdict(&curve_by_id("X14", None).unwrap(), &opts);
        assert_eq!(x14.verdict, Verdict::Cm);
        assert_eq!(x14.method, Method::Streit);
        let x6 = verdict(&curve_by_id("X6", None).unwrap(), &opts);
        assert_eq!(x6.verdict, Verdict::NoCm);
        assert_eq!(x6.method, Method::JInvariant);
        let x1 = verdict(&curve_by_id("X1", Some(4)).unwrap(), &opts);
        assert_eq!(x1.verdict, Verdict::Cm);
        assert_eq!(x1.method, Method::Cited);
    }

    #[test]
    fn verdict_x17_frobenius() {
        let opts = FrobeniusOptions::default();
        let v = verdict(&curve_by_id("X17", None).unwrap(), &opts);
        assert_eq!(v.verdict, Verdict::NoCm);
        assert_eq!(v.method, Method::Frobenius);
        if let Evidence::Frobenius { data, outcome, .. } = &v.evidence {
            let primes: Vec<u64> = data.iter().map(|d| d.p).collect();
            assert_eq!(primes, vec![31, 41]);
            assert!(outcome.product > outcome.bound);
        } else {
            panic!("expected frobenius evidence");
        }
    }
}
