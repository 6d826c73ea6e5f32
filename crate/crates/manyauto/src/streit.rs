//! Streit's representation-theoretic criterion.
//!
//! Each reduced automorphism group is realized by explicit Moebius
//! transformations; every element lifts to an automorphism of the curve
//! acting on the holomorphic differentials x^j dx/y.  The multiplicity of
//! the trivial character in Sym^2 of that action is computed exactly; when
//! it vanishes the jacobian has complex multiplication.
//!
//! The inner product is evaluated with a square-root-free trace formula:
//! for a lift of the Moebius map m = (a, b; c, d) with f-hat o m =
//! lambda * f-hat, the traces satisfy chi(tau)^2 = (det^2 / lambda) S(m)^2
//! and chi(tau^2) = (det^2 / lambda) S(m^2), where
//! S(m) = sum_j [x^j] (ax+b)^j (cx+d)^(g-1-j).  Both are independent of
//! the choice of lift, as is Sym^2 chi(tau) = (chi(tau)^2 + chi(tau^2))/2.

use crate::curves::{orbit_data, CurveSpec, GroupLabel, OrbitDatum};
use crate::numfield::{Ctx, NFElem, NFPoly, NumberFieldCtx, NumFieldError};
use num_rational::BigRational;
use num_traits::{One, Signed};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StreitError {
    #[error("degenerate matrix (zero determinant)")]
    Degenerate,
    #[error("realization failed orbit validation for {0}")]
    OrbitValidation(String),
    #[error("group closure did not terminate at the expected order")]
    BadClosure,
    #[error("map does not preserve the branch locus")]
    NotBranchPreserving,
    #[error("inner product is not a non-negative integer: {0}")]
    NonIntegral(String),
    #[error("cannot diagonalize: {0}")]
    NotDiagonalizable(String),
    #[error(transparent)]
    NumField(#[from] NumFieldError),
}

/// An element of PGL_2 over a number field, kept as an explicit matrix
/// (defined up to scalar).
#[derive(Clone)]
pub struct MobiusMap {
    pub a: NFElem,
    pub b: NFElem,
    pub c: NFElem,
    pub d: NFElem,
}

impl std::fmt::Debug for MobiusMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{:?}, {:?}; {:?}, {:?}]",
            self.a, self.b, self.c, self.d
        )
    }
}

impl MobiusMap {
    pub fn new(a: NFElem, b: NFElem, c: NFElem, d: NFElem) -> Result<MobiusMap, StreitError> {
        let m = MobiusMap { a, b, c, d };
        if m.det().is_zero() {
            return Err(StreitError::Degenerate);
        }
        Ok(m)
    }

    pub fn identity(ctx: &Ctx) -> MobiusMap {
        MobiusMap {
            a: NFElem::one(ctx),
            b: NFElem::zero(ctx),
            c: NFElem::zero(ctx),
            d: NFElem::one(ctx),
        }
    }

    pub fn diagonal(a: NFElem, d: NFElem) -> Result<MobiusMap, StreitError> {
        let ctx = a.ctx().clone();
        MobiusMap::new(a, NFElem::zero(&ctx), NFElem::zero(&ctx), d)
    }

    pub fn ctx(&self) -> &Ctx {
        self.a.ctx()
    }

    pub fn det(&self) -> NFElem {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    pub fn mul(&self, o: &MobiusMap) -> MobiusMap {
        MobiusMap {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            c: self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            d: self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        }
    }

    pub fn square(&self) -> MobiusMap {
        self.mul(self)
    }

    /// Canonical representative: scaled so that the first nonzero entry of
    /// (a, b, c, d) is 1.  Used for projective equality and hashing.
    pub fn normalized(&self) -> MobiusMap {
        let entries = [&self.a, &self.b, &self.c, &self.d];
        let pivot = entries.iter().find(|e| !e.is_zero()).expect("nonzero map");
        let inv = pivot.inverse().expect("nonzero pivot");
        MobiusMap {
            a: self.a.mul(&inv),
            b: self.b.mul(&inv),
            c: self.c.mul(&inv),
            d: self.d.mul(&inv),
        }
    }

    /// The adjugate matrix: the projective inverse.
    pub fn adjugate(&self) -> MobiusMap {
        MobiusMap {
            a: self.d.clone(),
            b: self.b.neg(),
            c: self.c.neg(),
            d: self.a.clone(),
        }
    }

    pub(crate) fn key(&self) -> Vec<BigRational> {
        let n = self.normalized();
        let mut k = vec![];
        for e in [&n.a, &n.b, &n.c, &n.d] {
            k.extend(e.coords().iter().cloned());
        }
        k
    }

    pub fn projectively_equal(&self, o: &MobiusMap) -> bool {
        self.key() == o.key()
    }

    pub fn is_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    pub fn is_triangular(&self) -> bool {
        self.b.is_zero() || self.c.is_zero()
    }

    /// Order in PGL_2.
    pub fn order(&self) -> usize {
        let mut p = self.normalized();
        for n in 1..=1000 {
            if p.is_identity() {
                return n;
            }
            p = p.mul(self).normalized();
        }
        panic!("element order not found (not finite order?)");
    }
}

/// A realized reduced automorphism group: explicit matrix list.
pub struct ReducedGroup {
    pub label: GroupLabel,
    pub elements: Vec<MobiusMap>,
}

/// Homogeneous coefficients (X^i Z^(size-i), i = 0..size) of the form
/// whose zero set on P^1 is the orbit: Z^size * poly(X/Z), so the
/// infinity point corresponds to the vanishing of the top coefficients.
pub(crate) fn homog_coeffs(poly: &NFPoly, size: usize) -> Vec<NFElem> {
    (0..=size).map(|i| poly.coeff(i)).collect()
}

/// Coefficients of F(aX + bZ, cX + dZ) for the homogeneous degree-`size`
/// form with the given coefficients.
pub(crate) fn homog_transform(coeffs: &[NFElem], m: &MobiusMap) -> Vec<NFElem> {
    let ctx = m.ctx();
    let size = coeffs.len() - 1;
    // powers of (a x + b) and (c x + d), as inhomogeneous polynomials in
    // the ratio X/Z; the Z-grading is restored by degree bookkeeping
    let la = NFPoly::new(ctx, vec![m.b.clone(), m.a.clone()]);
    let lc = NFPoly::new(ctx, vec![m.d.clone(), m.c.clone()]);
    let mut pow_a = vec![NFPoly::one(ctx)];
    let mut pow_c = vec![NFPoly::one(ctx)];
    for i in 1..=size {
        pow_a.push(pow_a[i - 1].mul(&la));
        pow_c.push(pow_c[i - 1].mul(&lc));
    }
    let mut acc = NFPoly::zero(ctx);
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        acc = acc.add(&pow_a[i].mul(&pow_c[size - i]).scale(c));
    }
    (0..=size).map(|i| acc.coeff(i)).collect()
}

/// The scalar lambda with u = lambda * v, if the coefficient vectors are
/// proportional.
pub(crate) fn proportionality(u: &[NFElem], v: &[NFElem]) -> Option<NFElem> {
    let pivot = v.iter().position(|e| !e.is_zero())?;
    let lambda = u[pivot].div(&v[pivot]).ok()?;
    for i in 0..u.len() {
        let vi = v.get(i)?;
        if u[i] != vi.mul(&lambda) {
            return None;
        }
    }
    Some(lambda)
}

fn group_generators(label: &GroupLabel, ctx: &Ctx) -> Vec<MobiusMap> {
    let one = NFElem::one(ctx);
    let zero = NFElem::zero(ctx);
    let flip = MobiusMap {
        a: zero.clone(),
        b: one.clone(),
        c: one.clone(),
        d: zero.clone(),
    };
    match label {
        GroupLabel::Cyclic(n) => {
            let z = NFElem::root_of_unity(ctx, *n);
            vec![MobiusMap::diagonal(z, one.clone()).unwrap()]
        }
        GroupLabel::Dihedral(n) => {
            let z = NFElem::root_of_unity(ctx, *n);
            vec![MobiusMap::diagonal(z, one.clone()).unwrap(), flip]
        }
        GroupLabel::A4 | GroupLabel::S4 => {
            let i = NFElem::root_of_unity(ctx, 4);
            let rot = MobiusMap::diagonal(i, one.clone()).unwrap();
            let half_turn = MobiusMap {
                a: one.clone(),
                b: one.clone(),
                c: one.clone(),
                d: one.neg(),
            };
            // S4 generators; A4 is carved out afterwards
            vec![rot, flip, half_turn]
        }
        GroupLabel::A5 => {
            let z5 = NFElem::root_of_unity(ctx, 5);
            let phi = z5.add(&z5.pow(4)); // 2 cos(2 pi / 5) = (sqrt5 - 1)/2
            let rot = MobiusMap::diagonal(z5, one.clone()).unwrap();
            let inv = MobiusMap {
                a: zero.clone(),
                b: one.neg(),
                c: one.clone(),
                d: zero.clone(),
            };
            let extra = MobiusMap {
                a: phi.clone(),
                b: one.clone(),
                c: one.clone(),
                d: phi.neg(),
            };
            vec![rot, inv, extra]
        }
    }
}

fn closure(gens: &[MobiusMap], max: usize) -> Result<Vec<MobiusMap>, StreitError> {
    let ctx = gens[0].ctx();
    let mut seen: HashMap<Vec<BigRational>, usize> = HashMap::new();
    let mut elems = vec![MobiusMap::identity(ctx).normalized()];
    seen.insert(elems[0].key(), 0);
    let mut frontier = vec![0usize];
    while let Some(i) = frontier.pop() {
        for gen in gens {
            let prod = elems[i].mul(gen).normalized();
            let k = prod.key();
            if !seen.contains_key(&k) {
                seen.insert(k, elems.len());
                frontier.push(elems.len());
                elems.push(prod);
                if elems.len() > max {
                    return Err(StreitError::BadClosure);
                }
            }
        }
    }
    Ok(elems)
}

/// Whether the map permutes the orbit (sends its defining homogeneous form
/// to a scalar multiple of itself).
fn preserves_orbit(m: &MobiusMap, orbit: &OrbitDatum) -> bool {
    let coeffs = homog_coeffs(&orbit.poly, orbit.size);
    let image = homog_transform(&coeffs, m);
    proportionality(&image, &coeffs).is_some()
}

/// Realize the reduced group as explicit Moebius transformations over the
/// given cyclotomic context, validated against its orbit structure.
pub fn realize_reduced_group(
    label: &GroupLabel,
    ctx: &Ctx,
) -> Result<ReducedGroup, StreitError> {
    let gens = group_generators(label, ctx);
    let elements = match label {
        GroupLabel::A4 => {
            // the index-2 subgroup of S4 preserving the two tetrahedral
            // orbits V(p4), V(q4) separately
            let s4 = closure(&gens, 24)?;
            if s4.len() != 24 {
                return Err(StreitError::BadClosure);
            }
            let orbits = orbit_data(label, ctx);
            let a4: Vec<MobiusMap> = s4
                .into_iter()
                .filter(|m| preserves_orbit(m, &orbits[1]))
                .collect();
            a4
        }
        _ => closure(&gens, label.order())?,
    };
    if elements.len() != label.order() {
        return Err(StreitError::BadClosure);
    }
    let group = ReducedGroup {
        label: label.clone(),
        elements,
    };
    // orbit validation on generators (invariance propagates through the
    // closure); for A4 validate on the filtered subgroup's generators by
    // checking every element, the group being small
    let orbits = orbit_data(label, ctx);
    let check: Vec<&MobiusMap> = match label {
        GroupLabel::A4 => group.elements.iter().collect(),
        _ => group.elements.iter().take(8).collect(),
    };
    for m in check {
        for o in &orbits {
            if !preserves_orbit(m, o) {
                return Err(StreitError::OrbitValidation(format!(
                    "{label}: orbit {}",
                    o.label
                )));
            }
        }
    }
    Ok(group)
}

/// S(m) = sum_{j=0}^{g-1} [x^j] (ax+b)^j (cx+d)^(g-1-j).
fn trace_sum(m: &MobiusMap, g: usize) -> NFElem {
    let ctx = m.ctx();
    let la = NFPoly::new(ctx, vec![m.b.clone(), m.a.clone()]);
    let lc = NFPoly::new(ctx, vec![m.d.clone(), m.c.clone()]);
    let mut pow_a = vec![NFPoly::one(ctx)];
    let mut pow_c = vec![NFPoly::one(ctx)];
    for i in 1..g {
        pow_a.push(pow_a[i - 1].mul(&la));
        pow_c.push(pow_c[i - 1].mul(&lc));
    }
    let mut s = NFElem::zero(ctx);
    for j in 0..g {
        // coefficient of x^j in pow_a[j] * pow_c[g-1-j]
        let pa = &pow_a[j];
        let pc = &pow_c[g - 1 - j];
        let mut c = NFElem::zero(ctx);
        for i in 0..=j {
            c = c.add(&pa.coeff(i).mul(&pc.coeff(j - i)));
        }
        s = s.add(&c);
    }
    s
}

/// lambda with f-hat(aX+bZ, cX+dZ) = lambda * f-hat, computed by
/// evaluation (the map is known to permute the branch locus).
fn lambda_by_eval(fhat: &[NFElem], m: &MobiusMap) -> Result<NFElem, StreitError> {
    let ctx = m.ctx();
    let size = fhat.len() - 1;
    let eval = |x: &NFElem, z: &NFElem| -> NFElem {
        // sum fhat[i] x^i z^(size-i)
        let mut acc = NFElem::zero(ctx);
        for i in (0..=size).rev() {
            acc = acc.mul(x).add(&fhat[i].mul(&z.pow((size - i) as u64)));
        }
        acc
    };
    for t in 0.. {
        let x0 = NFElem::from_int(ctx, t + 2);
        let z0 = NFElem::one(ctx);
        let v = eval(&x0, &z0);
        if v.is_zero() {
            continue;
        }
        let xi = m.a.mul(&x0).add(&m.b.mul(&z0));
        let zi = m.c.mul(&x0).add(&m.d.mul(&z0));
        let vi = eval(&xi, &zi);
        return v
            .inverse()
            .map(|inv| vi.mul(&inv))
            .map_err(StreitError::from);
    }
    unreachable!()
}

/// Sym^2 chi of (either) lift of m, via the trace formula.
fn sym2_of_element(fhat: &[NFElem], g: usize, m: &MobiusMap) -> Result<NFElem, StreitError> {
    let det = m.det();
    let lambda = lambda_by_eval(fhat, m)?;
    let scale = det.mul(&det).div(&lambda)?;
    let s1 = trace_sum(m, g);
    let s2 = trace_sum(&m.square(), g);
    let half = NFElem::from_rational(m.ctx(), crate::poly::bigfrac(1, 2));
    Ok(scale.mul(&s1.mul(&s1).add(&s2)).mul(&half))
}

/// chi(tau)^2 for either lift of m.
fn chi_squared_of_element(
    fhat: &[NFElem],
    g: usize,
    m: &MobiusMap,
) -> Result<NFElem, StreitError> {
    let det = m.det();
    let lambda = lambda_by_eval(fhat, m)?;
    let scale = det.mul(&det).div(&lambda)?;
    let s1 = trace_sum(m, g);
    Ok(scale.mul(&s1).mul(&s1))
}

/// Working coefficient field for a curve's character computation: just
/// large enough for the group matrices and the equation.
fn working_ctx(group: &GroupLabel) -> Ctx {
    match group {
        GroupLabel::Cyclic(n) | GroupLabel::Dihedral(n) => NumberFieldCtx::cyclotomic(*n),
        GroupLabel::A4 | GroupLabel::S4 => NumberFieldCtx::cyclotomic(12),
        GroupLabel::A5 => NumberFieldCtx::cyclotomic(5),
    }
}

/// Rebuild the curve equation over a context from its branch composition.
pub(crate) fn equation_in_ctx(curve: &CurveSpec, ctx: &Ctx) -> NFPoly {
    if let Some(q) = curve.f.as_qpoly() {
        return NFPoly::from_qpoly(ctx, &q);
    }
    let orbits = orbit_data(&curve.group, ctx);
    let mut f = NFPoly::one(ctx);
    for name in &curve.branch_orbits {
        match orbits.iter().find(|o| o.label == *name) {
            Some(o) => f = f.mul(&o.poly),
            None => {
                // family orbit names ("x^n-1", "infinity") are already
                // covered by the rational-coefficient path above
                unreachable!("unknown orbit label {name}")
            }
        }
    }
    f
}

/// Homogeneous degree-(2g+2) form of the right-hand side.
fn fhat_of(f: &NFPoly, g: usize) -> Vec<NFElem> {
    homog_coeffs(f, 2 * g + 2)
}

/// The multiplicity of the trivial character in Sym^2 of the action on
/// holomorphic differentials: (1/|Gbar|) sum over the reduced group.
pub fn sym2_inner_product(curve: &CurveSpec) -> Result<BigRational, StreitError> {
    let ctx = working_ctx(&curve.group);
    let f = equation_in_ctx(curve, &ctx);
    let fhat = fhat_of(&f, curve.genus);
    let group = realize_reduced_group(&curve.group, &ctx)?;
    let mut total = NFElem::zero(&ctx);
    for m in &group.elements {
        total = total.add(&sym2_of_element(&fhat, curve.genus, m)?);
    }
    let avg = total.scale(&crate::poly::bigfrac(1, group.elements.len() as i64));
    let value = avg
        .as_rational()
        .ok_or_else(|| StreitError::NonIntegral(format!("{avg:?}")))?;
    if !value.denom().is_one() || value.is_negative() {
        return Err(StreitError::NonIntegral(value.to_string()));
    }
    Ok(value)
}

/// Sym^2 character values over the reduced group, grouped by element
/// order and value: one (order, value, multiplicity) entry per distinct
/// pair, in sorted order.
pub fn sym2_class_values(curve: &CurveSpec) -> Result<Vec<(usize, String, usize)>, StreitError> {
    let ctx = working_ctx(&curve.group);
    let f = equation_in_ctx(curve, &ctx);
    let fhat = fhat_of(&f, curve.genus);
    let group = realize_reduced_group(&curve.group, &ctx)?;
    let mut acc: std::collections::BTreeMap<(usize, String), usize> = Default::default();
    for m in &group.elements {
        let v = sym2_of_element(&fhat, curve.genus, m)?;
        *acc.entry((m.order(), format!("{v:?}"))).or_default() += 1;
    }
    Ok(acc.into_iter().map(|((o, s), c)| (o, s, c)).collect())
}

/// Eigenvalues of one lift of m on the differentials x^j dx/y,
/// 0 <= j <= g-1.  The two lifts differ by a global sign.
pub fn lift_eigenvalues(curve: &CurveSpec, m: &MobiusMap) -> Result<Vec<NFElem>, StreitError> {
    let ctx = curve.ctx().clone();
    let g = curve.genus;
    let fhat = fhat_of(&curve.f, g);
    // branch preservation check
    let image = homog_transform(&fhat, m);
    let lambda = proportionality(&image, &fhat).ok_or(StreitError::NotBranchPreserving)?;
    let mu = lambda.sqrt()?;
    let det = m.det();
    let scale = det.div(&mu)?;
    if m.is_triangular() {
        // the matrix of the action on x^j dx/y is triangular with diagonal
        // entries a^j d^(g-1-j)
        return Ok((0..g)
            .map(|j| {
                m.a.pow(j as u64)
                    .mul(&m.d.pow((g - 1 - j) as u64))
                    .mul(&scale)
            })
            .collect());
    }
    // general case: the action has finite order, so its eigenvalues are
    // roots of unity times the scalar; find them as kernel dimensions
    let n = ctx
        .cyclotomic_order()
        .ok_or_else(|| StreitError::NotDiagonalizable("non-cyclotomic context".into()))?;
    // matrix M[i][j] = [x^i] (ax+b)^j (cx+d)^(g-1-j)
    let la = NFPoly::new(&ctx, vec![m.b.clone(), m.a.clone()]);
    let lc = NFPoly::new(&ctx, vec![m.d.clone(), m.c.clone()]);
    let mut pow_a = vec![NFPoly::one(&ctx)];
    let mut pow_c = vec![NFPoly::one(&ctx)];
    for i in 1..g.max(1) {
        pow_a.push(pow_a[i - 1].mul(&la));
        pow_c.push(pow_c[i - 1].mul(&lc));
    }
    let mut mat = vec![vec![NFElem::zero(&ctx); g]; g];
    for j in 0..g {
        let col = pow_a[j].mul(&pow_c[g - 1 - j]);
        for (i, row) in mat.iter_mut().enumerate() {
            row[j] = col.coeff(i).mul(&scale);
        }
    }
    let zeta = NFElem::gen(&ctx);
    let mut eigs = vec![];
    for k in 0..2 * n {
        // candidates: +/- zeta^k (the lift has order dividing 2n)
        let cand = if k < n {
            zeta.pow(k as u64)
        } else {
            zeta.pow((k - n) as u64).neg()
        };
        let dim = kernel_dimension(&mat, &cand);
        for _ in 0..dim {
            eigs.push(cand.clone());
        }
        if eigs.len() == g {
            break;
        }
    }
    if eigs.len() != g {
        return Err(StreitError::NotDiagonalizable(
            "eigenvalues are not roots of unity in the context".into(),
        ));
    }
    Ok(eigs)
}

/// dim ker(M - c I) by Gaussian elimination over the field.
fn kernel_dimension(mat: &[Vec<NFElem>], c: &NFElem) -> usize {
    let g = mat.len();
    let ctx = c.ctx().clone();
    let mut rows: Vec<Vec<NFElem>> = (0..g)
        .map(|i| {
            (0..g)
                .map(|j| {
                    if i == j {
                        mat[i][j].sub(c)
                    } else {
                        mat[i][j].clone()
                    }
                })
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..g {
        // find pivot
        let piv = (rank..g).find(|&r| !rows[r][col].is_zero());
        let Some(piv) = piv else { continue };
        rows.swap(rank, piv);
        let inv = rows[rank][col].inverse().expect("nonzero pivot");
        rows[rank] = rows[rank].iter().map(|e| e.mul(&inv)).collect();
        for r in 0..g {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                rows[r] = rows[r]
                    .iter()
                    .zip(rows[rank].clone())
                    .map(|(e, p)| e.sub(&p.mul(&factor)))
                    .collect();
            }
        }
        rank += 1;
        let _ = &ctx;
    }
    g - rank
}

/// Closed-form character values for an element whose image in PGL_2 has
/// order n and rotation number zeta at a fixed point lying on (k = 1) or
/// off (k = 0) the branch locus: returns (chi(tau)^2, chi(tau^2),
/// Sym^2 chi(tau)), which are independent of the choice of lift.
pub fn repchix_closed_form(
    n: usize,
    k: usize,
    zeta: &NFElem,
    g: usize,
) -> Result<(NFElem, NFElem, NFElem), StreitError> {
    let ctx = zeta.ctx().clone();
    assert!(k <= 1);
    let gi = g as i64;
    let rat = |v: BigRational| NFElem::from_rational(&ctx, v);
    let int = |v: i64| NFElem::from_int(&ctx, v);
    if n == 1 {
        assert!(zeta.is_one());
        return Ok((
            int(gi * gi),
            int(gi),
            rat(crate::poly::bigfrac(gi * (gi + 1), 2)),
        ));
    }
    if n == 2 {
        assert!(zeta.neg().is_one());
        let sign = if k == 0 { 1 } else { -1 };
        // chi = +/- i^k ((-1)^g - 1)/2
        let par = if g % 2 == 0 { 0 } else { -1 }; // ((-1)^g - 1)/2
        let chi2 = int(sign * (par * par));
        let chi_t2 = int(sign * gi);
        let sym2 = rat(crate::poly::bigfrac(
            sign * (1 + if (g + 1) % 2 == 0 { 1 } else { -1 } + 2 * gi),
            4,
        ));
        return Ok((chi2, chi_t2, sym2));
    }
    // n > 2: chi = +/- zeta^(1 - k/2) (zeta^g - 1)/(zeta - 1)
    let one = NFElem::one(&ctx);
    let zg = zeta.pow(g as u64);
    let num1 = zg.sub(&one);
    let den1 = zeta.sub(&one);
    let ratio1 = num1.div(&den1)?;
    // zeta^(2 - k): chi^2 carries zeta^(2 - k) in either sign
    let zpow = |e: usize| zeta.pow(e as u64);
    let chi2 = zpow(2 - k).mul(&ratio1).mul(&ratio1);
    let z2 = zeta.mul(zeta);
    let chi_t2 = zpow(2 - k)
        .mul(&zeta.pow(2 * g as u64).sub(&one))
        .div(&z2.sub(&one))?;
    // wait: the table gives chi(tau^2) = zeta^(2-k) (zeta^(2g) - 1)/(zeta^2 - 1)
    let sym2 = zpow(2 - k)
        .mul(&zg.sub(&one))
        .mul(&zeta.pow((g + 1) as u64).sub(&one))
        .div(&den1.mul(&z2.sub(&one)))?;
    Ok((chi2, chi_t2, sym2))
}

/// Direct trace-formula values (chi^2, chi(tau^2), Sym^2 chi) for a group
/// element acting on a curve, for cross-checking against the closed form.
pub fn direct_character_values(
    curve: &CurveSpec,
    ctx: &Ctx,
    m: &MobiusMap,
) -> Result<(NFElem, NFElem, NFElem), StreitError> {
    let f = equation_in_ctx(curve, ctx);
    let fhat = fhat_of(&f, curve.genus);
    let chi2 = chi_squared_of_element(&fhat, curve.genus, m)?;
    let sym2 = sym2_of_element(&fhat, curve.genus, m)?;
    // chi(tau^2) = 2 Sym^2 - chi^2
    let chi_t2 = sym2.add(&sym2).sub(&chi2);
    Ok((chi2, chi_t2, sym2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{curve_by_id, fixed_catalog};
    use crate::poly::big;

    #[test]
    fn realizations_have_right_orders() {
        let ctx12 = NumberFieldCtx::cyclotomic(12);
        let s4 = realize_reduced_group(&GroupLabel::S4, &ctx12).unwrap();
        assert_eq!(s4.elements.len(), 24);
        let a4 = realize_reduced_group(&GroupLabel::A4, &ctx12).unwrap();
        assert_eq!(a4.elements.len(), 12);
        let ctx5 = NumberFieldCtx::cyclotomic(5);
        let a5 = realize_reduced_group(&GroupLabel::A5, &ctx5).unwrap();
        assert_eq!(a5.elements.len(), 60);
        let ctx7 = NumberFieldCtx::cyclotomic(7);
        let c7 = realize_reduced_group(&GroupLabel::Cyclic(7), &ctx7).unwrap();
        assert_eq!(c7.elements.len(), 7);
        let ctx6 = NumberFieldCtx::cyclotomic(6);
        let d6 = realize_reduced_group(&GroupLabel::Dihedral(6), &ctx6).unwrap();
        assert_eq!(d6.elements.len(), 12);
    }

    #[test]
    fn identity_lift_gives_pm_g() {
        let x5 = curve_by_id("X5", None).unwrap();
        let id = MobiusMap::identity(x5.ctx());
        let eigs = lift_eigenvalues(&x5, &id).unwrap();
        assert_eq!(eigs.len(), 2);
        // all +1 or all -1
        assert!(eigs.iter().all(|e| e.is_one()) || eigs.iter().all(|e| e.neg().is_one()));
    }

    #[test]
    fn x1_diagonal_eigenvalues() {
        let x1 = curve_by_id("X1", Some(2)).unwrap();
        let ctx = x1.ctx().clone();
        let z5 = NFElem::root_of_unity(&ctx, 5);
        let m = MobiusMap::diagonal(z5.clone(), NFElem::one(&ctx)).unwrap();
        let eigs = lift_eigenvalues(&x1, &m).unwrap();
        // lift acts with eigenvalues +/- {zeta5, zeta5^2} for one sign
        let expect = [z5.clone(), z5.mul(&z5)];
        let matches_plus = eigs == expect;
        let matches_minus = eigs == [expect[0].neg(), expect[1].neg()];
        assert!(matches_plus || matches_minus, "{eigs:?}");
    }

    #[test]
    fn streit_vanishing_set() {
        // the CM verdicts by the character criterion
        let expected: std::collections::HashMap<&str, i64> = [
            ("X4", 0),
            ("X5", 0),
            ("X6", 1),
            ("X7", 0),
            ("X8", 1),
            ("X9", 0),
            ("X10", 1),
            ("X11", 1),
            ("X12", 1),
            ("X13", 2),
            ("X14", 0),
            ("X15", 4),
            ("X16", 1),
            ("X17", 2),
            ("X18", 4),
        ]
        .into_iter()
        .collect();
        for c in fixed_catalog() {
            let v = sym2_inner_product(&c).unwrap();
            assert_eq!(v, crate::poly::big(expected[&*c.id]), "{}", c.id);
        }
    }

    #[test]
    fn streit_families_nonnegative_integers() {
        for g in 2..=4 {
            for id in ["X1", "X2", "X3"] {
                let Ok(c) = curve_by_id(id, Some(g)) else {
                    continue;
                };
                let v = sym2_inner_product(&c).unwrap();
                assert!(!v.is_negative(), "{id} at g={g}: {v}");
                assert!(v.denom().is_one());
            }
        }
    }

    #[test]
    fn closed_form_matches_direct_on_diagonal_elements() {
        // every diagonal element of every realized group, on each fixed
        // curve of its type, plus the families
        let mut cases: Vec<CurveSpec> = fixed_catalog()
            .into_iter()
            .filter(|c| ["X5", "X6", "X12", "X4"].contains(&&*c.id))
            .collect();
        cases.push(curve_by_id("X1", Some(2)).unwrap());
        cases.push(curve_by_id("X2", Some(3)).unwrap());
        cases.push(curve_by_id("X3", Some(3)).unwrap());
        for curve in cases {
            let ctx = working_ctx(&curve.group);
            let group = realize_reduced_group(&curve.group, &ctx).unwrap();
            let f = equation_in_ctx(&curve, &ctx);
            for m in group.elements.iter().filter(|m| m.b.is_zero() && m.c.is_zero()) {
                let zeta = m.a.div(&m.d).unwrap();
                let n = MobiusMap::diagonal(zeta.clone(), NFElem::one(&ctx))
                    .unwrap()
                    .order();
                let k = usize::from(f.coeff(0).is_zero());
                let (chi2, chi_t2, sym2) =
                    repchix_closed_form(n, k, &zeta, curve.genus).unwrap();
                let (d_chi2, d_chi_t2, d_sym2) =
                    direct_character_values(&curve, &ctx, m).unwrap();
                assert_eq!(sym2, d_sym2, "{} sym2 n={n}", curve.id);
                assert_eq!(chi2, d_chi2, "{} chi2 n={n}", curve.id);
                assert_eq!(chi_t2, d_chi_t2, "{} chi_t2 n={n}", curve.id);
            }
        }
    }

    #[test]
    fn closed_form_spec_examples() {
        let ctx = NumberFieldCtx::cyclotomic(4);
        let minus_one = NFElem::from_int(&ctx, -1);
        // n=1: Sym^2 = g(g+1)/2
        let one = NFElem::one(&ctx);
        let (_, _, s) = repchix_closed_form(1, 0, &one, 4).unwrap();
        assert_eq!(s.as_rational().unwrap(), big(10));
        // n=2, k=0, g=2: Sym^2 = 1
        let (_, _, s) = repchix_closed_form(2, 0, &minus_one, 2).unwrap();
        assert_eq!(s.as_rational().unwrap(), big(1));
        // n=2, k=1, g=2: Sym^2 = -1
        let (_, _, s) = repchix_closed_form(2, 1, &minus_one, 2).unwrap();
        assert_eq!(s.as_rational().unwrap(), big(-1));
    }

    #[test]
    fn class_function_property() {
        // conjugate elements have equal Sym^2 values
        let x6 = curve_by_id("X6", None).unwrap();
        let ctx = working_ctx(&x6.group);
        let group = realize_reduced_group(&x6.group, &ctx).unwrap();
        let f = equation_in_ctx(&x6, &ctx);
        let fhat = fhat_of(&f, x6.genus);
        let m = &group.elements[5];
        let v = sym2_of_element(&fhat, x6.genus, m).unwrap();
        for h in group.elements.iter().take(6) {
            // conjugate h m h^-1: build via adjugate (projective inverse)
            let adj = MobiusMap {
                a: h.d.clone(),
                b: h.b.neg(),
                c: h.c.neg(),
                d: h.a.clone(),
            };
            let conj = h.mul(m).mul(&adj);
            let vc = sym2_of_element(&fhat, x6.genus, &conj).unwrap();
            assert_eq!(v, vc);
        }
    }

    #[test]
    fn eigenvalue_sym2_consistency() {
        // Sym^2 from the eigenvalue multiset equals the trace formula
        let x1 = curve_by_id("X1", Some(2)).unwrap();
        let ctx = x1.ctx().clone();
        let z5 = NFElem::root_of_unity(&ctx, 5);
        let m = MobiusMap::diagonal(z5, NFElem::one(&ctx)).unwrap();
        let eigs = lift_eigenvalues(&x1, &m).unwrap();
        let sum: NFElem = eigs
            .iter()
            .fold(NFElem::zero(&ctx), |acc, e| acc.add(e));
        let sum_sq: NFElem = eigs
            .iter()
            .fold(NFElem::zero(&ctx), |acc, e| acc.add(&e.mul(e)));
        let half = NFElem::from_rational(&ctx, crate::poly::bigfrac(1, 2));
        let sym2_from_eigs = sum.mul(&sum).add(&sum_sq).mul(&half);
        let f = equation_in_ctx(&x1, &ctx);
        let fhat = fhat_of(&f, x1.genus);
        let direct = sym2_of_element(&fhat, x1.genus, &m).unwrap();
        assert_eq!(sym2_from_eigs, direct);
    }
}
