//! The catalog of hyperelliptic curves with many automorphisms and the
//! classification engine that re-derives it.
//!
//! A hyperelliptic curve y^2 = f(x) has many automorphisms exactly when
//! its branch locus on the projective line (roots of f, plus infinity when
//! deg f is odd) is assembled from orbits of the reduced automorphism
//! group Gbar in PGL_2.  Enumerating the admissible orbit unions for each
//! finite subgroup type yields three infinite families (cyclic and
//! dihedral) and fifteen isolated curves (tetrahedral, octahedral,
//! icosahedral), reproduced here with exact equations.

use crate::numfield::{Ctx, NFElem, NFPoly, NumberFieldCtx};
use crate::poly::QPoly;
use serde_json::json;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("unknown curve id {0:?}")]
    UnknownId(String),
    #[error("unknown group label {0:?}")]
    UnknownGroup(String),
    #[error("curve {id} requires genus >= {min}, got {got}")]
    BadGenus { id: String, min: usize, got: usize },
    #[error("curve {0} is not parameterized by genus")]
    NotParameterized(String),
    #[error("branch size must be even and >= 6, got {0}")]
    BadBranchSize(usize),
    #[error("genus bound must be >= 2")]
    BadBound,
}

/// Finite subgroup type of PGL_2 acting as the reduced automorphism group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupLabel {
    /// C_n: rotations z -> zeta_n z.
    Cyclic(usize),
    /// D_n: the cyclic group C_n extended by z -> 1/z (order 2n).
    Dihedral(usize),
    A4,
    S4,
    A5,
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::Cyclic(n) => write!(f, "C{n}"),
            GroupLabel::Dihedral(n) => write!(f, "D{n}"),
            GroupLabel::A4 => write!(f, "A4"),
            GroupLabel::S4 => write!(f, "S4"),
            GroupLabel::A5 => write!(f, "A5"),
        }
    }
}

impl GroupLabel {
    pub fn order(&self) -> usize {
        match self {
            GroupLabel::Cyclic(n) => *n,
            GroupLabel::Dihedral(n) => 2 * n,
            GroupLabel::A4 => 12,
            GroupLabel::S4 => 24,
            GroupLabel::A5 => 60,
        }
    }
}

/// An exceptional (shorter than generic) orbit of the group on P^1,
/// described by the polynomial whose roots form its finite part.
#[derive(Debug, Clone)]
pub struct OrbitDatum {
    pub label: &'static str,
    /// Finite part of the orbit: the root set of this polynomial.
    pub poly: NFPoly,
    pub includes_infinity: bool,
    pub size: usize,
}

impl OrbitDatum {
    fn new(label: &'static str, poly: NFPoly, includes_infinity: bool) -> OrbitDatum {
        let size = poly.degree().unwrap_or(0) + usize::from(includes_infinity);
        OrbitDatum {
            label,
            poly,
            includes_infinity,
            size,
        }
    }
}

// ---- the fixed invariant polynomials (octahedral / icosahedral) ----

/// t_4 = x (x^4 - 1): vertices+face centers pattern for the octahedral set.
pub fn t4(ctx: &Ctx) -> NFPoly {
    NFPoly::from_qpoly(ctx, &QPoly::from_ints(&[0, -1, 0, 0, 0, 1]))
}

/// p_4 = x^4 + 2 i sqrt3 x^2 + 1 (one tetrahedral face orbit).
pub fn p4(ctx: &Ctx) -> NFPoly {
    let isqrt3 = NFElem::sqrt_int(ctx, -3).expect("sqrt(-3) in context");
    NFPoly::new(
        ctx,
        vec![
            NFElem::one(ctx),
            NFElem::zero(ctx),
            isqrt3.scale(&crate::poly::big(2)),
            NFElem::zero(ctx),
            NFElem::one(ctx),
        ],
    )
}

/// q_4 = x^4 - 2 i sqrt3 x^2 + 1 (the other tetrahedral face orbit).
pub fn q4(ctx: &Ctx) -> NFPoly {
    let isqrt3 = NFElem::sqrt_int(ctx, -3).expect("sqrt(-3) in context");
    NFPoly::new(
        ctx,
        vec![
            NFElem::one(ctx),
            NFElem::zero(ctx),
            isqrt3.scale(&crate::poly::big(-2)),
            NFElem::zero(ctx),
            NFElem::one(ctx),
        ],
    )
}

/// r_4 = x^12 - 33 x^8 - 33 x^4 + 1.
pub fn r4(ctx: &Ctx) -> NFPoly {
    NFPoly::from_qpoly(
        ctx,
        &QPoly::from_ints(&[1, 0, 0, 0, -33, 0, 0, 0, -33, 0, 0, 0, 1]),
    )
}

/// s_4 = p_4 q_4 = x^8 + 14 x^4 + 1.
pub fn s4(ctx: &Ctx) -> NFPoly {
    NFPoly::from_qpoly(ctx, &QPoly::from_ints(&[1, 0, 0, 0, 14, 0, 0, 0, 1]))
}

/// r_5 = x^20 - 228 x^15 + 494 x^10 + 228 x^5 + 1.
pub fn r5(ctx: &Ctx) -> NFPoly {
    let mut c = vec![0i64; 21];
    c[0] = 1;
    c[5] = 228;
    c[10] = 494;
    c[15] = -228;
    c[20] = 1;
    NFPoly::from_qpoly(ctx, &QPoly::from_ints(&c))
}

/// s_5 = x (x^10 + 11 x^5 - 1).
pub fn s5(ctx: &Ctx) -> NFPoly {
    let mut c = vec![0i64; 12];
    c[1] = -1;
    c[6] = 11;
    c[11] = 1;
    NFPoly::from_qpoly(ctx, &QPoly::from_ints(&c))
}

/// t_5 = x^30 + 522 x^25 - 10005 x^20 - 10005 x^10 - 522 x^5 + 1.
pub fn t5(ctx: &Ctx) -> NFPoly {
    let mut c = vec![0i64; 31];
    c[0] = 1;
    c[5] = -522;
    c[10] = -10005;
    c[20] = -10005;
    c[25] = 522;
    c[30] = 1;
    NFPoly::from_qpoly(ctx, &QPoly::from_ints(&c))
}

/// The exceptional orbits of a reduced group on P^1, with their sizes.
pub fn orbit_data(group: &GroupLabel, ctx: &Ctx) -> Vec<OrbitDatum> {
    match group {
        GroupLabel::Cyclic(_) => vec![
            OrbitDatum::new("infinity", NFPoly::one(ctx), true),
            OrbitDatum::new("zero", NFPoly::monomial(ctx, 1), false),
        ],
        GroupLabel::Dihedral(n) => {
            let xn_minus = NFPoly::monomial(ctx, *n).sub(&NFPoly::one(ctx));
            let xn_plus = NFPoly::monomial(ctx, *n).add(&NFPoly::one(ctx));
            vec![
                OrbitDatum::new("zero-infinity", NFPoly::monomial(ctx, 1), true),
                OrbitDatum::new("x^n-1", xn_minus, false),
                OrbitDatum::new("x^n+1", xn_plus, false),
            ]
        }
        GroupLabel::A4 => vec![
            OrbitDatum::new("t4+infinity", t4(ctx), true),
            OrbitDatum::new("p4", p4(ctx), false),
            OrbitDatum::new("q4", q4(ctx), false),
        ],
        GroupLabel::S4 => vec![
            OrbitDatum::new("t4+infinity", t4(ctx), true),
            OrbitDatum::new("r4", r4(ctx), false),
            OrbitDatum::new("s4", s4(ctx), false),
        ],
        GroupLabel::A5 => vec![
            OrbitDatum::new("s5+infinity", s5(ctx), true),
            OrbitDatum::new("r5", r5(ctx), false),
            OrbitDatum::new("t5", t5(ctx), false),
        ],
    }
}

/// A hyperelliptic curve y^2 = f(x) with many automorphisms.
#[derive(Debug, Clone)]
pub struct CurveSpec {
    /// X1..X18, the row of the classification table.
    pub id: String,
    pub genus: usize,
    pub group: GroupLabel,
    /// Label of the full automorphism group (metadata only).
    pub aut_label: String,
    /// Right-hand side f of the affine model, over `ctx`.
    pub f: NFPoly,
    /// Labels of the orbits composing the branch locus.
    pub branch_orbits: Vec<String>,
}

impl CurveSpec {
    pub fn ctx(&self) -> &Ctx {
        self.f.ctx()
    }

    /// Size of the branch locus: roots of f plus infinity when deg f odd.
    pub fn branch_size(&self) -> usize {
        let d = self.f.degree().expect("nonzero f");
        d + d % 2
    }

    /// Exact structural checks: separability and branch-count bookkeeping.
    pub fn validate(&self) {
        assert!(self.f.is_separable(), "{}: f must be separable", self.id);
        assert_eq!(
            self.branch_size(),
            2 * self.genus + 2,
            "{}: |Br| = 2g+2",
            self.id
        );
        assert!(self.genus >= 2, "{}: genus >= 2", self.id);
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<String> = (0..=self.f.degree().unwrap_or(0))
            .map(|i| format!("{:?}", self.f.coeff(i)))
            .collect();
        json!({
            "id": self.id,
            "genus": self.genus,
            "reduced_group": self.group.to_string(),
            "automorphism_group": self.aut_label,
            "coefficients": coeffs,
            "branch_orbits": self.branch_orbits,
        })
    }
}

/// Genus from the branch count |Br| = 2g + 2.
pub fn genus_of(branch_size: usize) -> Result<usize, CurveError> {
    if branch_size % 2 != 0 || branch_size < 6 {
        return Err(CurveError::BadBranchSize(branch_size));
    }
    Ok((branch_size - 2) / 2)
}

/// Coefficient field for the cyclic/dihedral families with rotation order
/// n: Q(zeta_4n), large enough for the square roots the character
/// computation needs.
pub fn family_ctx(n: usize) -> Ctx {
    NumberFieldCtx::cyclotomic(4 * n)
}

fn spec(
    id: &str,
    genus: usize,
    group: GroupLabel,
    aut_label: &str,
    f: NFPoly,
    branch_orbits: &[&str],
) -> CurveSpec {
    let c = CurveSpec {
        id: id.to_string(),
        genus,
        group,
        aut_label: aut_label.to_string(),
        f,
        branch_orbits: branch_orbits.iter().map(|s| s.to_string()).collect(),
    };
    c.validate();
    c
}

/// One of the three genus-parameterized families X1-X3.
pub fn family_curve(id: &str, g: usize) -> Result<CurveSpec, CurveError> {
    let bad = |min: usize| CurveError::BadGenus {
        id: id.to_string(),
        min,
        got: g,
    };
    match id {
        "X1" => {
            // y^2 = x^(2g+1) - 1, reduced group C_(2g+1)
            if g < 2 {
                return Err(bad(2));
            }
            let n = 2 * g + 1;
            let ctx = family_ctx(n);
            let f = NFPoly::monomial(&ctx, n).sub(&NFPoly::one(&ctx));
            Ok(spec(
                id,
                g,
                GroupLabel::Cyclic(n),
                &format!("C{}", 4 * g + 2),
                f,
                &["x^n-1", "infinity"],
            ))
        }
        "X2" => {
            // y^2 = x^(2g+2) - 1, reduced group D_(2g+2)
            if g < 2 {
                return Err(bad(2));
            }
            let n = 2 * g + 2;
            let ctx = family_ctx(n);
            let f = NFPoly::monomial(&ctx, n).sub(&NFPoly::one(&ctx));
            Ok(spec(
                id,
                g,
                GroupLabel::Dihedral(n),
                &format!("V{}", 2 * g + 2),
                f,
                &["x^n-1"],
            ))
        }
        "X3" => {
            // y^2 = x^(2g+1) - x, reduced group D_(2g)
            if g < 3 {
                return Err(bad(3));
            }
            let n = 2 * g;
            let ctx = family_ctx(n);
            let f = NFPoly::monomial(&ctx, n)
                .sub(&NFPoly::one(&ctx))
                .mul(&NFPoly::monomial(&ctx, 1));
            Ok(spec(
                id,
                g,
                GroupLabel::Dihedral(n),
                &format!("U{}", 2 * g),
                f,
                &["x^n-1", "zero-infinity"],
            ))
        }
        "X4" | "X5" | "X6" | "X7" | "X8" | "X9" | "X10" | "X11" | "X12" | "X13" | "X14"
        | "X15" | "X16" | "X17" | "X18" => Err(CurveError::NotParameterized(id.to_string())),
        other => Err(CurveError::UnknownId(other.to_string())),
    }
}

/// The fifteen isolated curves X4-X18, over the master field.
pub fn fixed_catalog() -> Vec<CurveSpec> {
    let ctx = NumberFieldCtx::master();
    let t4p = t4(&ctx);
    let r4p = r4(&ctx);
    let s4p = s4(&ctx);
    let r5p = r5(&ctx);
    let s5p = s5(&ctx);
    let t5p = t5(&ctx);
    vec![
        spec("X4", 4, GroupLabel::A4, "SL2(3)", t4p.mul(&p4(&ctx)), &["t4+infinity", "p4"]),
        spec("X5", 2, GroupLabel::S4, "GL2(3)", t4p.clone(), &["t4+infinity"]),
        spec("X6", 3, GroupLabel::S4, "C2xS4", s4p.clone(), &["s4"]),
        spec("X7", 5, GroupLabel::S4, "W2", r4p.clone(), &["r4"]),
        spec("X8", 6, GroupLabel::S4, "GL2(3)", s4p.mul(&t4p), &["s4", "t4+infinity"]),
        spec("X9", 8, GroupLabel::S4, "W3", r4p.mul(&t4p), &["r4", "t4+infinity"]),
        spec("X10", 9, GroupLabel::S4, "W2", r4p.mul(&s4p), &["r4", "s4"]),
        spec(
            "X11",
            12,
            GroupLabel::S4,
            "W3",
            r4p.mul(&s4p).mul(&t4p),
            &["r4", "s4", "t4+infinity"],
        ),
        spec("X12", 5, GroupLabel::A5, "C2xA5", s5p.clone(), &["s5+infinity"]),
        spec("X13", 9, GroupLabel::A5, "C2xA5", r5p.clone(), &["r5"]),
        spec("X14", 14, GroupLabel::A5, "SL2(5)", t5p.clone(), &["t5"]),
        spec("X15", 15, GroupLabel::A5, "C2xA5", r5p.mul(&s5p), &["r5", "s5+infinity"]),
        spec("X16", 20, GroupLabel::A5, "SL2(5)", s5p.mul(&t5p), &["s5+infinity", "t5"]),
        spec("X17", 24, GroupLabel::A5, "SL2(5)", r5p.mul(&t5p), &["r5", "t5"]),
        spec(
            "X18",
            30,
            GroupLabel::A5,
            "SL2(5)",
            r5p.mul(&s5p).mul(&t5p),
            &["r5", "s5+infinity", "t5"],
        ),
    ]
}

/// Look up any curve by id, materializing X1-X3 at the given genus.
pub fn curve_by_id(id: &str, genus: Option<usize>) -> Result<CurveSpec, CurveError> {
    match id {
        "X1" | "X2" | "X3" => {
            let g = genus.unwrap_or(match id {
                "X3" => 3,
                _ => 2,
            });
            family_curve(id, g)
        }
        _ => fixed_catalog()
            .into_iter()
            .find(|c| c.id == id)
            .ok_or_else(|| CurveError::UnknownId(id.to_string())),
    }
}

/// The full table: the fixed curves plus the families materialized for
/// every genus in the inclusive range.
pub fn catalog(family_genus_range: (usize, usize)) -> Vec<CurveSpec> {
    let mut out = vec![];
    let (lo, hi) = family_genus_range;
    for id in ["X1", "X2", "X3"] {
        for g in lo..=hi {
            if let Ok(c) = family_curve(id, g) {
                out.push(c);
            }
        }
    }
    out.extend(fixed_catalog());
    out
}

/// Re-derive the curve list for one reduced group type from its orbit
/// data: enumerate orbit unions of even size 2g+2 >= 6, discarding the
/// configurations whose true reduced group is larger.
pub fn enumerate_branch_loci(
    group: &GroupLabel,
    genus_bound: usize,
) -> Result<Vec<CurveSpec>, CurveError> {
    if genus_bound < 2 {
        return Err(CurveError::BadBound);
    }
    match group {
        GroupLabel::Cyclic(_) => {
            // Exceptional orbits {0} and {infinity} are too small on their
            // own, so the branch locus is one free orbit V(x^n - c)
            // (normalized to c = 1) plus exceptional points to even out the
            // parity.  For n even the resulting locus is dihedral-stable,
            // so the genuinely cyclic case is n odd with exactly one
            // exceptional point, normalized to infinity; n >= 5 keeps
            // genus >= 2.
            let mut out = vec![];
            let mut n = 5;
            while (n - 1) / 2 <= genus_bound {
                out.push(family_curve("X1", (n - 1) / 2)?);
                n += 2;
            }
            Ok(out)
        }
        GroupLabel::Dihedral(_) => {
            // Candidate unions from orbit sizes {2, n, n}.  Taking both
            // size-n orbits gives V(x^2n - 1), stable under D_2n: excluded.
            // For n odd every remaining union has odd size.  For n even:
            // V(x^n-1) alone (genus (n-2)/2, n >= 6; n = 4 is the
            // octahedral t4 locus) or V(x^n-1) + {0, infinity} (genus n/2,
            // n >= 6; n = 4 again gives t4).
            let mut out = vec![];
            let mut n = 6;
            while (n - 2) / 2 <= genus_bound || n / 2 <= genus_bound {
                if (n - 2) / 2 <= genus_bound {
                    out.push(family_curve("X2", (n - 2) / 2)?);
                }
                if n / 2 <= genus_bound {
                    out.push(family_curve("X3", n / 2)?);
                }
                n += 2;
            }
            Ok(out)
        }
        GroupLabel::A4 => {
            // Unions of {t4+inf (6), p4 (4), q4 (4)} of even size >= 6:
            // p4+q4 = s4 and any union containing it (or t4 alone) is
            // S4-stable: excluded.  Only t4+inf plus one of p4/q4 remains;
            // p4 and q4 give isomorphic curves, normalized to p4.
            Ok(fixed_catalog().into_iter().filter(|c| c.id == "X4").collect())
        }
        GroupLabel::S4 => {
            // All seven nonempty unions of {6, 12, 8} have even size >= 6
            // and none is stable under a larger group.
            Ok(fixed_catalog()
                .into_iter()
                .filter(|c| c.group == GroupLabel::S4)
                .collect())
        }
        GroupLabel::A5 => {
            // Likewise all seven nonempty unions of {12, 20, 30}.
            Ok(fixed_catalog()
                .into_iter()
                .filter(|c| c.group == GroupLabel::A5)
                .collect())
        }
    }
}

pub fn group_by_name(name: &str) -> Result<GroupLabel, CurveError> {
    match name {
        "A4" => Ok(GroupLabel::A4),
        "S4" => Ok(GroupLabel::S4),
        "A5" => Ok(GroupLabel::A5),
        _ => {
            if let Some(rest) = name.strip_prefix('C') {
                if let Ok(n) = rest.parse::<usize>() {
                    return Ok(GroupLabel::Cyclic(n));
                }
            }
            if let Some(rest) = name.strip_prefix('D') {
                if let Ok(n) = rest.parse::<usize>() {
                    return Ok(GroupLabel::Dihedral(n));
                }
            }
            Err(CurveError::UnknownGroup(name.to_string()))
        }
    }
}
