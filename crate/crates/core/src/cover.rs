//! Finite covers `k[y] -> B`: Noether normalization, minimal polynomials of fiber
//! generators, generic rank, the complete-intersection approximation `B'` and the
//! point-set comparisons between `B`, `B'` and the intersection of hypersurface strata.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::ideal::Ideal;
use crate::local::{order_at_point, LinearChange};
use crate::monomial::Monomial;
use crate::oracle::{self, PointTable};
use crate::order::MonomialOrder;
use crate::poly::Poly;
use crate::random;
use crate::strata::hypersurface_stratum_ideal;

/// Cap on random linear changes tried by Noether normalization.
pub const RETRY_CAP: usize = 20;

/// A linear change after which the ring is finite over the base coordinates.
#[derive(Clone, Debug)]
pub struct NoetherData {
    pub change: LinearChange,
    pub base_vars: Vec<usize>,
    pub fiber_vars: Vec<usize>,
    /// The ideal rewritten in the new coordinates.
    pub ideal: Ideal,
}

fn mask_of(n: usize, vars: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in vars {
        m[v] = true;
    }
    m
}

fn complement(n: usize, vars: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !vars.contains(i)).collect()
}

/// Finiteness over `k[base]`: every fiber variable has a pure power among the leading
/// monomials of a Gröbner basis eliminating the fibers.
pub fn is_finite_over(ideal: &Ideal, base: &[usize]) -> Result<bool> {
    let n = ideal.nvars();
    let fiber = complement(n, base);
    if fiber.is_empty() {
        return Ok(true);
    }
    let ord = MonomialOrder::elimination(&mask_of(n, &fiber));
    let lms = ideal.leading_monomials(&ord)?;
    Ok(fiber.iter().all(|&v| lms.iter().any(|m| m.pure_power_var() == Some(v))))
}

/// Identity change with a prescribed base; errors when the projection is not finite.
pub fn noether_with_base(j: &Ideal, base: &[usize]) -> Result<NoetherData> {
    if !is_finite_over(j, base)? {
        return Err(Error::NotFinite(format!("not finite over the variables {base:?}")));
    }
    let n = j.nvars();
    Ok(NoetherData {
        change: LinearChange::identity(j.field(), n),
        base_vars: base.to_vec(),
        fiber_vars: complement(n, base),
        ideal: j.clone(),
    })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Tries coordinate projections (later variables first), then random linear changes.
pub fn noether_normalization(j: &Ideal, graded: bool) -> Result<NoetherData> {
    if graded && !j.is_homogeneous() {
        return Err(Error::Contract("graded Noether normalization needs a homogeneous ideal".into()));
    }
    let n = j.nvars();
    let d = j.krull_dim()?.ok_or(Error::InvalidInput("the unit ideal has no normalization".into()))?;
    let mut subsets = combinations(n, d);
    subsets.reverse();
    for base in subsets.iter().take(12) {
        if is_finite_over(j, base)? {
            return noether_with_base(j, base);
        }
    }
    let field = j.field();
    let base: Vec<usize> = ((n - d)..n).collect();
    let mut rng = random::rng();
    for _ in 0..RETRY_CAP {
        // y_base -> y_base + sum r * x_fiber keeps the change unipotent
        let mut change = LinearChange::identity(field, n);
        for &b in &base {
            for i in 0..(n - d) {
                change.matrix[b][i] = random::field_elem(&mut rng, field, 5);
            }
        }
        let moved = change.apply_ideal(j);
        if is_finite_over(&moved, &base)? {
            return Ok(NoetherData { change, base_vars: base, fiber_vars: (0..n - d).collect(), ideal: moved });
        }
    }
    Err(Error::Genericity {
        attempts: RETRY_CAP,
        detail: format!("no finite linear projection found over {field:?}; try a larger prime"),
    })
}

#[derive(Clone, Debug)]
pub struct MinPoly {
    /// Monic in the target variable, coefficients in the base variables.
    pub poly: Poly,
    pub var: usize,
    pub degree: u32,
    /// Set when a lower-degree, non-monic relation exists (torsion or embedded components).
    pub warning: Option<String>,
}

/// Monic relation of least degree for the variable `var` over `k[base]`.
pub fn minimal_polynomial_of_var(ideal: &Ideal, base: &[usize], var: usize) -> Result<MinPoly> {
    let n = ideal.nvars();
    let mut keep = base.to_vec();
    keep.push(var);
    let elim = ideal.elimination_ideal(&keep)?;
    if elim.is_zero() {
        return Err(Error::NotFinite(format!("variable {var} is transcendental over the base")));
    }
    let ord = MonomialOrder::elimination(&mask_of(n, &[var]));
    let gb = elim.groebner(&ord)?;
    let monic = gb
        .iter()
        .filter(|g| g.leading_monomial(&ord).unwrap().pure_power_var() == Some(var))
        .min_by_key(|g| g.degree_in(var).unwrap())
        .ok_or(Error::NotFinite(format!("no monic relation for variable {var}")))?;
    let degree = monic.degree_in(var).unwrap();
    let lowest = gb.iter().filter_map(|g| g.degree_in(var)).filter(|&e| e > 0).min().unwrap_or(degree);
    let warning = (lowest < degree).then(|| {
        format!("a non-monic relation of degree {lowest} < {degree} exists; the ring may have torsion over the base")
    });
    Ok(MinPoly { poly: monic.monic(&ord), var, degree, warning })
}

/// Minimal polynomial of an arbitrary element `theta`, in a fresh trailing variable `Z`.
pub fn minimal_polynomial(ideal: &Ideal, base: &[usize], theta: &Poly) -> Result<MinPoly> {
    let n = ideal.nvars();
    let z = Poly::var(ideal.field(), n + 1, n);
    let big = ideal.extend_vars(1).with(vec![z.sub(&theta.extend_vars(1))]);
    minimal_polynomial_of_var(&big, base, n)
}

#[derive(Clone, Debug)]
pub struct CoverPresentation {
    pub field: Field,
    pub nvars: usize,
    pub base_vars: Vec<usize>,
    pub fiber_vars: Vec<usize>,
    /// `x = A x'`; all data below lives in the primed coordinates.
    pub change: LinearChange,
    pub relation_ideal: Ideal,
    pub min_polys: Vec<Poly>,
    pub degrees: Vec<u32>,
    pub d_product: u64,
    pub generic_rank: u64,
    pub warnings: Vec<String>,
}

/// Skeleton plus minimal polynomials, without the rank computation.
pub fn cover_skeleton(nd: NoetherData) -> Result<CoverPresentation> {
    let mut min_polys = Vec::new();
    let mut degrees = Vec::new();
    let mut warnings = Vec::new();
    for &v in &nd.fiber_vars {
        let mp = minimal_polynomial_of_var(&nd.ideal, &nd.base_vars, v)?;
        if let Some(w) = mp.warning {
            warnings.push(w);
        }
        degrees.push(mp.degree);
        min_polys.push(mp.poly);
    }
    let d_product = degrees.iter().map(|&d| d as u64).product();
    Ok(CoverPresentation {
        field: nd.ideal.field(),
        nvars: nd.ideal.nvars(),
        base_vars: nd.base_vars,
        fiber_vars: nd.fiber_vars,
        change: nd.change,
        relation_ideal: nd.ideal,
        min_polys,
        degrees,
        d_product,
        generic_rank: 0,
        warnings,
    })
}

/// Full presentation: normalization (or the given base), minimal polynomials, generic rank.
pub fn build_cover(j: &Ideal, base: Option<&[usize]>) -> Result<CoverPresentation> {
    let nd = match base {
        Some(b) => noether_with_base(j, b)?,
        None => noether_normalization(j, false)?,
    };
    let mut cover = cover_skeleton(nd)?;
    cover.generic_rank = generic_rank(&cover.relation_ideal, &cover.base_vars)?;
    Ok(cover)
}

fn count_fiber_standard(lms: &[Monomial], fiber: &[usize]) -> Result<u64> {
    let parts: Vec<Monomial> = lms.iter().map(|m| m.select(fiber)).collect();
    let hs = crate::hilbert::hilbert_series(&parts, fiber.len());
    if hs.dim != 0 {
        return Err(Error::NotFinite("fiber algebra is not finite-dimensional".into()));
    }
    Ok(hs.degree() as u64)
}

/// `dim_K B (x) K` over `K = k(base)`, with specialization cross-checks.
pub fn generic_rank(relation: &Ideal, base: &[usize]) -> Result<u64> {
    let n = relation.nvars();
    let fiber = complement(n, base);
    let ord = MonomialOrder::elimination(&mask_of(n, &fiber));
    let lms = relation.leading_monomials(&ord)?;
    let generic = count_fiber_standard(&lms, &fiber)?;
    if base.is_empty() {
        return Ok(generic);
    }
    let field = relation.field();
    let mut rng = random::rng();
    let mut agree = 0;
    for _ in 0..RETRY_CAP {
        let mut images: Vec<Poly> = (0..n).map(|i| Poly::var(field, n, i)).collect();
        for &b in base {
            images[b] = Poly::constant(field, n, random::field_elem(&mut rng, field, 20));
        }
        let spec = relation.map_polys(|g| g.substitute(&images));
        let lms = spec.leading_monomials(&MonomialOrder::Grevlex)?;
        let count = count_fiber_standard(&lms, &fiber)?;
        if count < generic {
            return Err(Error::Internal(format!("a fiber of length {count} is shorter than the generic rank {generic}")));
        }
        if count == generic {
            agree += 1;
            if agree == 3 {
                return Ok(generic);
            }
        }
    }
    Err(Error::Genericity { attempts: RETRY_CAP, detail: "fewer than three specializations reached the generic rank".into() })
}

#[derive(Clone, Debug)]
pub struct CIScheme {
    pub ideal: Ideal,
    pub hypersurfaces: Vec<Poly>,
    pub degrees: Vec<u32>,
    pub d_product: u64,
}

/// `B' = k[y, V] / <f_1(V_1), ..., f_m(V_m)>`; checks `B' -> B` is a surjection.
pub fn ci_approximation(cover: &CoverPresentation) -> Result<CIScheme> {
    for f in &cover.min_polys {
        if !cover.relation_ideal.contains(f)? {
            return Err(Error::Internal("a minimal polynomial is not in the relation ideal".into()));
        }
    }
    Ok(CIScheme {
        ideal: Ideal::new(cover.field, cover.nvars, cover.min_polys.clone()),
        hypersurfaces: cover.min_polys.clone(),
        degrees: cover.degrees.clone(),
        d_product: cover.d_product,
    })
}

/// `sum_i <D^a f_i : |a| < d_i>`: its zeros are the points of multiplicity `D` on `B'`.
pub fn theorem16_locus(ci: &CIScheme) -> Ideal {
    let nvars = ci.ideal.nvars();
    let field = ci.ideal.field();
    let mut gens = Vec::new();
    for (f, &d) in ci.hypersurfaces.iter().zip(&ci.degrees) {
        gens.extend(hypersurface_stratum_ideal(f, d).gens().iter().cloned());
    }
    Ideal::new(field, nvars, gens)
}

pub(crate) fn oracle_gens(i: &Ideal, q: u32) -> Result<Vec<Poly>> {
    if let Field::Prime(p) = i.field() {
        if p != q {
            return Err(Error::InvalidInput(format!("ideal is over GF({p}) but the oracle modulus is {q}")));
        }
    }
    let f = Field::prime(q)?;
    let gens: Vec<Poly> = i.gens().iter().map(|g| g.map_field(f)).collect::<Result<_>>()?;
    Ok(if gens.is_empty() { vec![Poly::zero(f, i.nvars())] } else { gens })
}

pub(crate) fn stratify(i: &Ideal, q: u32, n_max: u32) -> Result<PointTable> {
    oracle::stratify_points(&oracle_gens(i, q)?, i.nvars(), q, n_max)
}

pub(crate) fn point_set(pts: Vec<Vec<u32>>) -> BTreeSet<Vec<u32>> {
    pts.into_iter().collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct LocusReport {
    pub q: u32,
    pub generic_rank: u64,
    pub d_product: u64,
    /// Points of `B` with multiplicity `n`.
    pub top_b: Vec<Vec<u32>>,
    /// Points of `B'` with multiplicity `D`.
    pub top_ci: Vec<Vec<u32>>,
    /// Zeros of the stratum-ideal sum.
    pub locus: Vec<Vec<u32>>,
    pub equal: bool,
    /// Every point of `B` has multiplicity at most `n`.
    pub rank_bounds_multiplicity: bool,
    /// The base projection is injective on the top stratum of `B`.
    pub injective_on_top: bool,
    pub max_mult_b: Option<u32>,
}

pub fn verify_locus_equality(cover: &CoverPresentation, ci: &CIScheme, q: u32, n_max: u32) -> Result<LocusReport> {
    let tb = stratify(&cover.relation_ideal, q, n_max)?;
    let tc = stratify(&ci.ideal, q, n_max)?;
    let locus = oracle::enumerate_points(&oracle_gens(&theorem16_locus(ci), q)?, cover.nvars, q)?;
    let top_b = tb.with_mult(cover.generic_rank as u32);
    let top_ci = tc.with_mult(ci.d_product as u32);
    let (sb, sc, sl) = (point_set(top_b.clone()), point_set(top_ci.clone()), point_set(locus.points.clone()));
    let projected: BTreeSet<Vec<u32>> =
        top_b.iter().map(|p| cover.base_vars.iter().map(|&b| p[b]).collect()).collect();
    Ok(LocusReport {
        q,
        generic_rank: cover.generic_rank,
        d_product: ci.d_product,
        equal: sb == sc && sc == sl,
        rank_bounds_multiplicity: tb.mults.iter().all(|m| m.unwrap() as u64 <= cover.generic_rank),
        injective_on_top: projected.len() == top_b.len(),
        max_mult_b: tb.max_mult(),
        top_b,
        top_ci,
        locus: locus.points,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionDropReport {
    pub q: u32,
    pub distinguished_var: usize,
    pub b: u32,
    /// Every top point of `B` projects into the order-`b` locus of `g_b`.
    pub hypothesis_a: bool,
    pub witness: Option<Vec<u32>>,
    /// Maximal multiplicity on `B' / <g_b>`.
    pub s: Option<u32>,
    pub top_b: Vec<Vec<u32>>,
    pub top_bbar: Vec<Vec<u32>>,
    pub equal: bool,
}

/// Picks the base variable in which `g` has least positive degree with a constant leading coefficient.
pub fn default_distinguished_var(g: &Poly, base: &[usize]) -> Option<usize> {
    base.iter()
        .copied()
        .filter(|&v| {
            let d = g.degree_in(v).unwrap_or(0);
            d > 0 && g.coefficients_in(v)[d as usize].is_constant()
        })
        .min_by_key(|&v| g.degree_in(v).unwrap())
}

pub fn dimension_drop_check(
    cover: &CoverPresentation,
    ci: &CIScheme,
    g_b: &Poly,
    dist: Option<usize>,
    q: u32,
    n_max: u32,
) -> Result<DimensionDropReport> {
    if !g_b.uses_only(&mask_of(cover.nvars, &cover.base_vars)) {
        return Err(Error::InvalidInput("g_b must only involve base variables".into()));
    }
    let v = match dist {
        Some(v) => v,
        None => default_distinguished_var(g_b, &cover.base_vars)
            .ok_or(Error::InvalidInput("g_b is not monic in any base variable".into()))?,
    };
    let b = g_b.degree_in(v).unwrap_or(0);
    if b < 2 || !g_b.coefficients_in(v)[b as usize].is_constant() {
        return Err(Error::InvalidInput(format!("g_b must be monic of degree >= 2 in variable {v}")));
    }
    let field = Field::prime(q)?;
    let gq = g_b.map_field(field)?;
    let tb = stratify(&cover.relation_ideal, q, n_max)?;
    let top_b = tb.with_mult(cover.generic_rank as u32);
    let mut witness = None;
    for p in &top_b {
        let pt: Vec<FieldElem> = oracle::point_elems(field, p);
        if order_at_point(&gq, &pt).map(|o| o < b).unwrap_or(true) {
            witness = Some(p.clone());
            break;
        }
    }
    let bbar = ci.ideal.with(vec![g_b.clone()]);
    let tbar = stratify(&bbar, q, n_max)?;
    let s = tbar.max_mult();
    let top_bbar = s.map(|s| tbar.with_mult(s)).unwrap_or_default();
    Ok(DimensionDropReport {
        q,
        distinguished_var: v,
        b,
        hypothesis_a: witness.is_none(),
        witness,
        s,
        equal: point_set(top_b.clone()) == point_set(top_bbar.clone()),
        top_b,
        top_bbar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn ideal(src: &[&str], vars: &[&str], f: Field) -> Ideal {
        let names: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        Ideal::new(f, vars.len(), src.iter().map(|s| parse_poly(s, &names, f).unwrap()).collect())
    }

    const Q: Field = Field::Rational;
    const CURVE: [&str; 3] = ["y^2 - x*z", "x^3 - y*z", "z^2 - x^2*y"];

    #[test]
    fn normalization_examples() {
        let nd = noether_normalization(&ideal(&["x^2 - y^3"], &["x", "y"], Q), false).unwrap();
        assert_eq!((nd.base_vars.clone(), nd.fiber_vars.clone()), (vec![1], vec![0]));
        assert!(nd.change.is_identity());
        let xy = ideal(&["x*y"], &["x", "y"], Q);
        assert!(!is_finite_over(&xy, &[0]).unwrap() && !is_finite_over(&xy, &[1]).unwrap());
        let nd = noether_normalization(&xy, true).unwrap();
        assert!(!nd.change.is_identity());
        assert!(is_finite_over(&nd.ideal, &nd.base_vars).unwrap());
        let curve = ideal(&CURVE, &["x", "y", "z"], Q);
        assert!(is_finite_over(&curve, &[0]).unwrap());
    }

    #[test]
    fn minimal_polynomials() {
        let names = ["x", "y", "z"].map(String::from);
        let curve = ideal(&CURVE, &["x", "y", "z"], Q);
        let mp = minimal_polynomial_of_var(&curve, &[0], 1).unwrap();
        assert_eq!((mp.degree, mp.poly.fmt_with(&names)), (3, "-x^4 + y^3".to_string()));
        let mp = minimal_polynomial_of_var(&curve, &[0], 2).unwrap();
        assert_eq!((mp.degree, mp.poly.fmt_with(&names)), (3, "-x^5 + z^3".to_string()));
        let b = ideal(&["V^2 - y"], &["y", "V"], Q);
        assert_eq!(minimal_polynomial_of_var(&b, &[0], 1).unwrap().degree, 2);
    }

    #[test]
    fn ranks_and_ci() {
        assert_eq!(generic_rank(&ideal(&["V^2 - y"], &["y", "V"], Q), &[0]).unwrap(), 2);
        let curve = build_cover(&ideal(&CURVE, &["x", "y", "z"], Q), Some(&[0])).unwrap();
        assert_eq!(curve.generic_rank, 3);
        let ci = ci_approximation(&curve).unwrap();
        assert_eq!(ci.d_product, 9);
        assert_eq!(generic_rank(&ci.ideal, &[0]).unwrap(), 9);
        let free = ideal(&["V^2 - y", "W^3 - u"], &["y", "u", "V", "W"], Q);
        assert_eq!(generic_rank(&free, &[0, 1]).unwrap(), 6);
    }

    #[test]
    fn locus_examples() {
        let vars = ["y", "w", "V"];
        let b = build_cover(&ideal(&["V^2 - y*w"], &vars, Q), Some(&[0, 1])).unwrap();
        let ci = ci_approximation(&b).unwrap();
        let locus = theorem16_locus(&ci);
        assert!(locus.same_as(&ideal(&["V", "y", "w"], &vars, Q)).unwrap());
        let rep = verify_locus_equality(&b, &ci, 5, 10).unwrap();
        assert!(rep.equal && rep.rank_bounds_multiplicity && rep.injective_on_top);
        assert_eq!(rep.top_b, vec![vec![0, 0, 0]]);
    }

    #[test]
    fn dimension_drop_reports() {
        let vars = ["y1", "y2", "V"];
        let names = vars.map(String::from);
        let b = build_cover(&ideal(&["V^2 - y1*y2"], &vars, Q), Some(&[0, 1])).unwrap();
        let ci = ci_approximation(&b).unwrap();
        let g = parse_poly("y1^2 - y2^3", &names, Q).unwrap();
        let rep = dimension_drop_check(&b, &ci, &g, None, 7, 10).unwrap();
        assert_eq!((rep.distinguished_var, rep.b), (0, 2));
        assert!(rep.hypothesis_a);
        let bad = parse_poly("y1^2 - 1", &names, Q).unwrap();
        let rep = dimension_drop_check(&b, &ci, &bad, None, 7, 10).unwrap();
        assert!(!rep.hypothesis_a);
        assert_eq!(rep.witness, Some(vec![0, 0, 0]));
    }
}
