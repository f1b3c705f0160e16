//! Multiplicity strata. Hypersurface strata come from Hasse derivatives; the top stratum
//! of a cone is a linear subspace, computed two independent ways (through a finite
//! presentation, and as the group of translations preserving the cone).

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cover::{self, CoverPresentation, RETRY_CAP};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::ideal::{exact_division, Ideal};
use crate::linalg;
use crate::local::{unit_vector, LinearChange, SubspaceData};
use crate::monomial::{monomials_up_to, Monomial};
use crate::oracle;
use crate::order::MonomialOrder;
use crate::poly::Poly;
use crate::random;

/// Box size below which zero sets over `GF(p)` are enumerated instead of sampled.
const ENUMERATION_LIMIT: u64 = 200_000;

/// `<D^a f : |a| <= e - 1>`; its zeros are the points where `f` has order at least `e`.
pub fn hypersurface_stratum_ideal(f: &Poly, e: u32) -> Ideal {
    assert!(e >= 1, "stratum level must be positive");
    let n = f.nvars();
    let gens = monomials_up_to(n, e - 1)
        .iter()
        .map(|a| f.hasse_derivative(&a.exponents().collect::<Vec<u32>>()))
        .collect();
    Ideal::new(f.field(), n, gens)
}

/// Highest order `e` reached somewhere on `V(f)`, with the ideal of that locus.
pub fn max_multiplicity_locus_hypersurface(f: &Poly) -> Result<(u32, Ideal)> {
    if f.is_constant() {
        return Err(Error::NoLocus("a constant polynomial has no multiplicity locus".into()));
    }
    let mut prev = hypersurface_stratum_ideal(f, 1);
    for e in 2.. {
        let next = hypersurface_stratum_ideal(f, e);
        if next.is_unit()? {
            return Ok((e - 1, prev));
        }
        prev = next;
    }
    unreachable!()
}

/// Root of `(x - a)^m` given in expanded form; `None` if `g` is not of that shape.
fn repeated_root(g: &Poly, var: usize) -> Option<FieldElem> {
    let coeffs = g.coefficients_in(var);
    let m = coeffs.len() as u32 - 1;
    if m == 0 {
        return None;
    }
    let field = g.field();
    let c = |j: u32| coeffs[j as usize].constant_term();
    let p = field.characteristic();
    // m = p^k m' with p not dividing m'
    let (mut pk, mut mp) = (1u32, m);
    if p > 0 {
        while mp % p == 0 {
            mp /= p;
            pk *= p;
        }
    }
    let lc = c(m);
    // coefficient of x^{(m'-1) p^k} is -m' a^{p^k} lc, and a^{p^k} = a for prime-field a
    let a = c((mp - 1) * pk).neg().div(&lc.mul(&field.from_i64(mp as i64)));
    g.evaluate(&point_on_var(field, g.nvars(), var, &a)).is_zero().then_some(a)
}

fn point_on_var(field: Field, n: usize, var: usize, a: &FieldElem) -> Vec<FieldElem> {
    let mut v = vec![field.zero(); n];
    v[var] = a.clone();
    v
}

/// The unique point of a zero-dimensional ideal with a single rational zero.
fn single_point(k: &Ideal) -> Result<Option<Vec<FieldElem>>> {
    let n = k.nvars();
    let mut pt = Vec::with_capacity(n);
    for i in 0..n {
        let e = k.elimination_ideal(&[i])?;
        let gb = e.reduced_basis()?;
        if gb.len() != 1 {
            return Ok(None);
        }
        match repeated_root(&gb[0], i) {
            Some(a) => pt.push(a),
            None => return Ok(None),
        }
    }
    Ok(k.gens().iter().all(|g| g.evaluate(&pt).is_zero()).then_some(pt))
}

/// Points spanning the zero set of an ideal whose zero set is expected to be linear.
fn sample_points(ideal: &Ideal, dim: usize) -> Result<Vec<Vec<FieldElem>>> {
    let (field, n) = (ideal.field(), ideal.nvars());
    if let Field::Prime(p) = field {
        if (p as u64).checked_pow(n as u32).is_some_and(|t| t <= ENUMERATION_LIMIT) {
            let gens = if ideal.is_zero() { vec![Poly::zero(field, n)] } else { ideal.gens().to_vec() };
            let t = oracle::enumerate_points(&gens, n, p)?;
            return Ok(t.points.iter().map(|pt| oracle::point_elems(field, pt)).collect());
        }
    }
    let mut pts: Vec<Vec<FieldElem>> = Vec::new();
    if dim == 0 {
        return Ok(pts);
    }
    let mut rng = random::rng();
    for _ in 0..RETRY_CAP {
        let planes: Vec<Poly> = (0..dim)
            .map(|_| {
                let mut h = Poly::constant(field, n, field.one()).neg();
                for i in 0..n {
                    h.add_term(Monomial::var(n, i, 1), random::field_elem(&mut rng, field, 7));
                }
                h
            })
            .collect();
        let k = ideal.with(planes);
        if k.krull_dim()? != Some(0) {
            continue;
        }
        if let Some(pt) = single_point(&k)? {
            pts.push(pt);
            if linalg::rank(field, &pts, n) == dim {
                return Ok(pts);
            }
        }
    }
    Err(Error::Genericity { attempts: RETRY_CAP, detail: "could not sample points spanning the stratum".into() })
}

/// Linear subspace `L` with `sqrt(I) = I(L)`, checked both ways by radical membership.
pub fn extract_linear_subspace(ideal: &Ideal) -> Result<SubspaceData> {
    let (field, n) = (ideal.field(), ideal.nvars());
    if ideal.is_zero() {
        return Ok(SubspaceData::whole(field, n));
    }
    let dim = ideal.krull_dim()?.ok_or(Error::NonLinearStratum("the zero set is empty".into()))?;
    let pts = sample_points(ideal, dim)?;
    let rows = if pts.is_empty() {
        (0..n).map(|i| unit_vector(field, n, i)).collect()
    } else {
        linalg::nullspace(field, &pts, n)
    };
    let s = SubspaceData::from_rows(field, n, rows);
    if s.dim() != dim {
        return Err(Error::NonLinearStratum(format!("sampled span has dimension {} but the zero set has dimension {dim}", s.dim())));
    }
    for l in s.cutting_forms() {
        if !ideal.radical_contains(&l)? {
            return Err(Error::NonLinearStratum(format!("the form {l} does not vanish on the zero set")));
        }
    }
    let lin = Ideal::new(field, n, s.cutting_forms());
    for g in ideal.gens() {
        if !lin.contains(g)? {
            return Err(Error::NonLinearStratum(format!("the generator {g} does not vanish on the sampled span")));
        }
    }
    Ok(s)
}

#[derive(Clone, Debug)]
pub struct ConeStratumData {
    pub stratum: SubspaceData,
    pub tau: usize,
    pub max_mult: u64,
    /// Degrees `d_i` of the minimal polynomials of the presentation used.
    pub degrees: Vec<u32>,
}

/// Top multiplicity stratum of the cone `V(J)`, via a finite presentation.
pub fn cone_stratum(j: &Ideal, cover: Option<&CoverPresentation>) -> Result<ConeStratumData> {
    if !j.is_homogeneous() {
        return Err(Error::Contract("cone_stratum needs a homogeneous ideal".into()));
    }
    let (field, n) = (j.field(), j.nvars());
    if j.is_unit()? {
        return Err(Error::InvalidInput("the unit ideal defines no cone".into()));
    }
    let max_mult = j.hilbert_series()?.degree() as u64;
    if j.is_zero() {
        return Ok(ConeStratumData { stratum: SubspaceData::whole(field, n), tau: 0, max_mult, degrees: vec![] });
    }
    let owned;
    let cover = match cover {
        Some(c) => c,
        None => {
            owned = cover::cover_skeleton(cover::noether_normalization(j, true)?)?;
            &owned
        }
    };
    let mut sum = Ideal::new(field, n, vec![]);
    for (f, &d) in cover.min_polys.iter().zip(&cover.degrees) {
        sum = sum.sum(&hypersurface_stratum_ideal(f, d));
    }
    let primed = extract_linear_subspace(&sum)?;
    let stratum = if cover.change.is_identity() {
        primed
    } else {
        let inv = cover.change.inverse()?;
        let forms: Vec<Poly> = primed.cutting_forms().iter().map(|l| inv.apply(l)).collect();
        SubspaceData::from_forms(field, n, &forms)?
    };
    Ok(ConeStratumData { tau: n - stratum.dim(), stratum, max_mult, degrees: cover.degrees.clone() })
}

fn pth_root(g: &Poly, p: u32) -> Poly {
    let mut r = Poly::zero(g.field(), g.nvars());
    for (m, c) in g.terms() {
        let e: Vec<u32> = m.exponents().map(|x| x / p).collect();
        r.add_term(Monomial::from_exponents(&e), c.clone());
    }
    r
}

/// `gcd(a, b)` as `a b / lcm(a, b)`, the lcm generating `<a> ∩ <b>`.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Result<Poly> {
    if a.is_zero() {
        return Ok(b.clone());
    }
    if b.is_zero() {
        return Ok(a.clone());
    }
    let (field, n) = (a.field(), a.nvars());
    let inter = Ideal::new(field, n, vec![a.clone()]).intersect(&Ideal::new(field, n, vec![b.clone()]))?;
    let gb = inter.reduced_basis()?;
    if gb.len() != 1 {
        return Err(Error::Internal("intersection of principal ideals is not principal".into()));
    }
    Ok(exact_division(&a.mul(b), &gb[0])?.monic(&MonomialOrder::Grevlex))
}

fn poly_lcm(a: &Poly, b: &Poly) -> Result<Poly> {
    let g = poly_gcd(a, b)?;
    exact_division(&a.mul(b), &g)
}

/// Product of the distinct irreducible factors of `g`, valid in every characteristic.
pub fn squarefree_part(g: &Poly) -> Result<Poly> {
    let (field, n) = (g.field(), g.nvars());
    if g.is_constant() {
        return Ok(Poly::one(field, n));
    }
    let partials: Vec<Poly> = (0..n)
        .map(|i| g.hasse_derivative(&unit_vector_u32(n, i)))
        .filter(|d| !d.is_zero())
        .collect();
    if partials.is_empty() {
        return squarefree_part(&pth_root(g, field.characteristic()));
    }
    let mut common = g.clone();
    for d in &partials {
        common = poly_gcd(&common, d)?;
    }
    if common.is_constant() {
        return Ok(g.monic(&MonomialOrder::Grevlex));
    }
    let rest = exact_division(g, &common)?;
    poly_lcm(&squarefree_part(&rest)?, &squarefree_part(&common)?).map(|p| p.monic(&MonomialOrder::Grevlex))
}

fn unit_vector_u32(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// `<sqfree(g_i)>`: lies between `J` and `sqrt(J)`, so it has the same radical.
pub fn reduced_approximation(j: &Ideal) -> Result<Ideal> {
    let gens = j.gens().iter().map(squarefree_part).collect::<Result<Vec<_>>>()?;
    Ok(Ideal::new(j.field(), j.nvars(), gens))
}

/// Translations `v` with `g(x + v) ∈ J` for every generator, solved with parameters `s`.
pub fn translation_invariance_subspace(j: &Ideal, reduce_first: bool) -> Result<SubspaceData> {
    if !j.is_homogeneous() {
        return Err(Error::Contract("translation invariance needs a homogeneous ideal".into()));
    }
    let (field, n) = (j.field(), j.nvars());
    let target = if reduce_first { reduced_approximation(j)? } else { j.clone() };
    let big = target.extend_vars(n);
    let mut xmask = vec![false; 2 * n];
    for m in xmask.iter_mut().take(n) {
        *m = true;
    }
    let ord = MonomialOrder::elimination(&xmask);
    let mut shift: Vec<Poly> = (0..n).map(|i| Poly::var(field, 2 * n, i).add(&Poly::var(field, 2 * n, n + i))).collect();
    shift.extend((n..2 * n).map(|i| Poly::var(field, 2 * n, i)));
    let svars: Vec<usize> = (n..2 * n).collect();
    let mut conditions: Vec<Poly> = Vec::new();
    for g in target.gens() {
        let moved = g.extend_vars(n).substitute(&shift);
        let nf = big.normal_form(&moved, &ord)?;
        // group by the x-part of each term
        let mut groups: std::collections::BTreeMap<Monomial, Poly> = std::collections::BTreeMap::new();
        for (m, c) in nf.terms() {
            let xpart = m.select(&(0..n).collect::<Vec<_>>());
            let spart = m.select(&svars);
            groups.entry(xpart).or_insert_with(|| Poly::zero(field, n)).add_term(spart, c.clone());
        }
        conditions.extend(groups.into_values());
    }
    let w = extract_linear_subspace(&Ideal::new(field, n, conditions))?;
    // each basis translation must preserve the reduced cone
    for v in w.basis() {
        for g in target.gens() {
            if !j.radical_contains(&g.translate(&v))? {
                let names = crate::poly::default_names(n);
                return Err(Error::NonLinearStratum(format!(
                    "translation {:?} moves {} off the reduced cone",
                    v.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    g.fmt_with(&names)
                )));
            }
        }
    }
    Ok(w)
}

/// Linear change `x = A x'` sending `S` to the span of the last `dim S` coordinates.
pub fn adapted_change(s: &SubspaceData) -> LinearChange {
    let (field, n) = (s.field, s.nvars);
    let basis = s.basis();
    let mut cols: Vec<Vec<FieldElem>> = Vec::new();
    for i in 0..n {
        if cols.len() + basis.len() == n {
            break;
        }
        let mut trial = cols.clone();
        trial.extend(basis.iter().cloned());
        trial.push(unit_vector(field, n, i));
        if linalg::rank(field, &trial, n) == trial.len() {
            cols.push(unit_vector(field, n, i));
        }
    }
    cols.extend(basis);
    let matrix = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
    LinearChange { field, matrix }
}

/// Whether `sqrt(J)` is extended from the first `codim S` adapted coordinates, i.e. the
/// reduced cone is a product with `S`.
pub fn factorization_check(j: &Ideal, s: &SubspaceData) -> Result<bool> {
    let n = j.nvars();
    let tau = s.codim();
    let change = adapted_change(s);
    let moved = change.apply_ideal(j);
    let e = moved.elimination_ideal(&(0..tau).collect::<Vec<_>>())?;
    for g in moved.gens() {
        if !e.radical_contains(g)? {
            return Ok(false);
        }
    }
    let _ = n;
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumComparison {
    pub q: u32,
    pub same_points: bool,
    /// Level sets of the multiplicity coincide on the common point set.
    pub same_partition: bool,
    pub top_first_in_top_second: bool,
    pub top_second_in_top_first: bool,
    pub top_first_in_second: bool,
    pub top_second_in_first: bool,
    pub max_first: Option<u32>,
    pub max_second: Option<u32>,
}

fn level_sets(t: &oracle::PointTable) -> BTreeSet<BTreeSet<Vec<u32>>> {
    let levels: BTreeSet<u32> = t.mults.iter().flatten().copied().collect();
    levels.into_iter().map(|e| t.with_mult(e).into_iter().collect()).collect()
}

/// Compares the oracle stratifications of two schemes in the same ring over `GF(q)`.
pub fn pointwise_stratum_compare(i1: &Ideal, i2: &Ideal, q: u32, n_max: u32) -> Result<StratumComparison> {
    let t1 = cover::stratify(i1, q, n_max)?;
    let t2 = cover::stratify(i2, q, n_max)?;
    let p1: BTreeSet<Vec<u32>> = t1.points.iter().cloned().collect();
    let p2: BTreeSet<Vec<u32>> = t2.points.iter().cloned().collect();
    let top = |t: &oracle::PointTable| -> BTreeSet<Vec<u32>> { t.max_mult().map(|e| t.with_mult(e).into_iter().collect()).unwrap_or_default() };
    let (top1, top2) = (top(&t1), top(&t2));
    Ok(StratumComparison {
        q,
        same_points: p1 == p2,
        same_partition: p1 == p2 && level_sets(&t1) == level_sets(&t2),
        top_first_in_top_second: top1.is_subset(&top2),
        top_second_in_top_first: top2.is_subset(&top1),
        top_first_in_second: top1.is_subset(&p2),
        top_second_in_first: top2.is_subset(&p1),
        max_first: t1.max_mult(),
        max_second: t2.max_mult(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn ideal(src: &[&str], vars: &[&str], f: Field) -> Ideal {
        let nm = names(vars);
        Ideal::new(f, vars.len(), src.iter().map(|s| parse_poly(s, &nm, f).unwrap()).collect())
    }

    fn poly(s: &str, vars: &[&str], f: Field) -> Poly {
        parse_poly(s, &names(vars), f).unwrap()
    }

    const Q: Field = Field::Rational;
    const XYZ: [&str; 3] = ["x", "y", "z"];

    #[test]
    fn hypersurface_strata() {
        let i = hypersurface_stratum_ideal(&poly("x^2 - y^3", &["x", "y"], Q), 2);
        assert!(i.same_as(&ideal(&["x^2 - y^3", "2*x", "-3*y^2"], &["x", "y"], Q)).unwrap());
        let i = hypersurface_stratum_ideal(&poly("x^2 - y^3", &XYZ, Q), 2);
        assert!(i.radical_contains(&poly("y", &XYZ, Q)).unwrap());
        assert!(!i.radical_contains(&poly("z", &XYZ, Q)).unwrap());
        let f2 = Field::Prime(2);
        let i = hypersurface_stratum_ideal(&poly("x^2 + y^2*z", &XYZ, f2), 2);
        assert!(i.radical_contains(&poly("x", &XYZ, f2)).unwrap());
        assert!(i.radical_contains(&poly("y", &XYZ, f2)).unwrap());
        assert!(!i.radical_contains(&poly("z", &XYZ, f2)).unwrap());
    }

    #[test]
    fn max_loci() {
        let (e, l) = max_multiplicity_locus_hypersurface(&poly("x^2 - y^3", &["x", "y"], Q)).unwrap();
        assert_eq!((e, l.krull_dim().unwrap()), (2, Some(0)));
        let (e, l) = max_multiplicity_locus_hypersurface(&poly("x", &["x", "y"], Q)).unwrap();
        assert_eq!((e, l.krull_dim().unwrap()), (1, Some(1)));
        let (e, l) = max_multiplicity_locus_hypersurface(&poly("x^2 - y^2*z", &XYZ, Q)).unwrap();
        assert_eq!(e, 2);
        assert_eq!(extract_linear_subspace(&l).unwrap(), SubspaceData::coordinate(Q, 3, &[0, 1]));
        assert!(max_multiplicity_locus_hypersurface(&poly("3", &["x"], Q)).is_err());
    }

    #[test]
    fn cone_strata() {
        let s = cone_stratum(&ideal(&["x^2"], &XYZ, Q), None).unwrap();
        assert_eq!((s.stratum.clone(), s.tau), (SubspaceData::coordinate(Q, 3, &[0]), 1));
        let s = cone_stratum(&ideal(&["x^2 - y^2"], &XYZ, Q), None).unwrap();
        assert_eq!((s.stratum.clone(), s.tau), (SubspaceData::coordinate(Q, 3, &[0, 1]), 2));
        // tangent cone of the monomial curve (t^3, t^4, t^5): a triple line
        let cone = ideal(&["y^2 - x*z", "y*z", "z^2"], &XYZ, Field::Prime(7));
        let s = cone_stratum(&cone, None).unwrap();
        assert_eq!((s.tau, s.max_mult), (2, 3));
        let t = oracle::stratify_points(cone.gens(), 3, 7, 10).unwrap();
        let top: Vec<Vec<u32>> = t.with_mult(3);
        assert_eq!(top.len(), 7);
        assert!(top.iter().all(|p| p[1] == 0 && p[2] == 0));
    }

    #[test]
    fn translation_invariance() {
        let t = translation_invariance_subspace(&ideal(&["x^2"], &XYZ, Q), false).unwrap();
        assert_eq!(t, SubspaceData::coordinate(Q, 3, &[0]));
        let t = translation_invariance_subspace(&ideal(&["x^2 - y^2"], &XYZ, Q), true).unwrap();
        assert_eq!(t, SubspaceData::coordinate(Q, 3, &[0, 1]));
        let f2 = Field::Prime(2);
        let j = ideal(&["x^2 + y^2"], &XYZ, f2);
        let t = translation_invariance_subspace(&j, true).unwrap();
        assert_eq!(t, cone_stratum(&j, None).unwrap().stratum);
    }

    #[test]
    fn squarefree_parts() {
        let v = ["x", "y"];
        let sq = squarefree_part(&poly("x^3*y^2 - x^2*y^3", &v, Q)).unwrap();
        assert!(Ideal::new(Q, 2, vec![sq]).same_as(&ideal(&["x*y*(x - y)"], &v, Q)).unwrap());
        let f3 = Field::Prime(3);
        let sq = squarefree_part(&poly("x^3*y", &v, f3)).unwrap();
        assert!(Ideal::new(f3, 2, vec![sq]).same_as(&ideal(&["x*y"], &v, f3)).unwrap());
    }

    #[test]
    fn factorization() {
        let j = ideal(&["x^2"], &XYZ, Q);
        assert!(factorization_check(&j, &SubspaceData::coordinate(Q, 3, &[0])).unwrap());
        let j = ideal(&["x^2 - y^2"], &XYZ, Q);
        assert!(factorization_check(&j, &SubspaceData::coordinate(Q, 3, &[0, 1])).unwrap());
        let j = ideal(&["x^2 - y*z"], &XYZ, Q);
        assert!(factorization_check(&j, &SubspaceData::origin(Q, 3)).unwrap());
        assert!(!factorization_check(&j, &SubspaceData::coordinate(Q, 3, &[0, 1])).unwrap());
    }

    #[test]
    fn pointwise_comparisons() {
        let v = ["x", "y"];
        let a = ideal(&["x^2 - y^3"], &v, Q);
        let r = pointwise_stratum_compare(&a, &a, 7, 10).unwrap();
        assert!(r.same_partition);
        let b = ideal(&["(x^2 - y^3)^2"], &v, Q);
        let r = pointwise_stratum_compare(&a, &b, 7, 10).unwrap();
        assert!(r.same_points && r.same_partition);
        assert_eq!((r.max_first, r.max_second), (Some(2), Some(4)));
    }
}
