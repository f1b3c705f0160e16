//! Algebraic equimultiplicity criteria along a coordinate center: normal and fiber cones,
//! analytic spread against height, the nilpotent-kernel test, reductions of ideals and
//! integral closure through minimal polynomials.

use serde::Serialize;

use crate::blowup::Center;
use crate::cover::{self, CoverPresentation};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::hilbert::hilbert_series;
use crate::ideal::Ideal;
use crate::local::{hilbert_samuel_data, multiplicity_at_point, PointedScheme};
use crate::monomial::Monomial;
use crate::oracle;
use crate::order::MonomialOrder;
use crate::poly::Poly;
use crate::random;

#[derive(Clone, Debug)]
pub struct FiberConeData {
    /// `in_P(I)`: lowest forms for the order along the center, in the ambient ring.
    pub normal_cone_ideal: Ideal,
    /// `in_P(I)` with the non-cut variables set to zero.
    pub fiber_cone_ideal: Ideal,
    pub analytic_spread: usize,
    pub height: usize,
}

/// The centred ideal, after checking that the center lies on the scheme.
fn centered_on(x: &PointedScheme, c: &Center) -> Result<Ideal> {
    if c.nvars() != x.nvars() {
        return Err(Error::InvalidInput("center and scheme live in different rings".into()));
    }
    let i = x.centered();
    let mask = c.mask();
    if i.gens().iter().any(|g| g.order_along(&mask) == Some(0)) {
        return Err(Error::Contract("the center is not contained in the scheme".into()));
    }
    Ok(i)
}

/// Ideal of `P`-initial forms, `P` generated by the cut variables. Uses the deformation
/// `x_cut -> t x_cut`: saturate by `t`, then set `t = 0`.
pub fn normal_cone_ideal(i: &Ideal, c: &Center) -> Result<Ideal> {
    let (field, n) = (i.field(), i.nvars());
    if i.is_zero() {
        return Ok(i.clone());
    }
    let t = Poly::var(field, n + 1, n);
    let images: Vec<Poly> = (0..=n)
        .map(|v| {
            let x = Poly::var(field, n + 1, v);
            if v < n && c.cut().contains(&v) {
                x.mul(&t)
            } else {
                x
            }
        })
        .collect();
    let mask = c.mask();
    let mut gens = Vec::with_capacity(i.gens().len());
    for g in i.gens() {
        let m = g.order_along(&mask).unwrap_or(0);
        let moved = g.extend_vars(1).substitute(&images);
        gens.push(moved.div_monomial(&Monomial::var(n + 1, n, m)).ok_or(Error::Internal("order along the center".into()))?);
    }
    let sat = Ideal::new(field, n + 1, gens).saturation(&t)?;
    let mut at_zero: Vec<Poly> = (0..n).map(|v| Poly::var(field, n, v)).collect();
    at_zero.push(Poly::zero(field, n));
    let cone = Ideal::new(field, n, sat.gens().iter().map(|g| g.substitute(&at_zero)).collect());
    let basis = cone.reduced_basis()?;
    Ok(Ideal::new(field, n, basis.to_vec()))
}

fn restrict_to_cut(g: &Poly, c: &Center) -> Poly {
    let (field, n) = (g.field(), g.nvars());
    let images: Vec<Poly> =
        (0..n).map(|v| if c.cut().contains(&v) { Poly::var(field, n, v) } else { Poly::zero(field, n) }).collect();
    g.substitute(&images)
}

pub fn fiber_cone(x: &PointedScheme, c: &Center) -> Result<FiberConeData> {
    let i = centered_on(x, c)?;
    let (field, n) = (i.field(), i.nvars());
    let free = n - c.cut().len();
    let nc = normal_cone_ideal(&i, c)?;
    let fc = Ideal::new(field, n, nc.gens().iter().map(|g| restrict_to_cut(g, c)).collect());
    let dim_fc = fc.krull_dim()?.ok_or(Error::Internal("fiber cone is the unit ideal".into()))?;
    let local_dim = hilbert_samuel_data(x, 0)?.dimension;
    if local_dim < free {
        return Err(Error::Contract("the center has larger dimension than the scheme".into()));
    }
    Ok(FiberConeData { normal_cone_ideal: nc, fiber_cone_ideal: fc, analytic_spread: dim_fc - free, height: local_dim - free })
}

/// Multiplicity of the localization at the center's prime: the degree of `in_P(I)` over
/// the function field of the center, read off a block order with the cut variables on top.
pub fn generic_center_multiplicity(normal_cone: &Ideal, c: &Center) -> Result<u64> {
    let ord = MonomialOrder::elimination(&c.mask());
    let lms: Vec<Monomial> = normal_cone.leading_monomials(&ord)?.iter().map(|m| m.select(c.cut())).collect();
    let hs = hilbert_series(&lms, c.cut().len());
    if hs.degree() <= 0 {
        return Err(Error::Internal("normal cone has no generic fiber".into()));
    }
    Ok(hs.degree() as u64)
}

#[derive(Clone, Debug, Serialize)]
pub struct SampledMultiplicity {
    pub point: Vec<String>,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquimultVerdict {
    pub multiplicity_at_point: u64,
    pub generic_multiplicity: u64,
    pub samples: Vec<SampledMultiplicity>,
    pub analytic_spread: usize,
    pub height: usize,
    pub multiplicity_verdict: bool,
    pub spread_verdict: bool,
    pub agree: bool,
}

impl EquimultVerdict {
    pub fn equimultiple(&self) -> bool {
        self.multiplicity_verdict && self.spread_verdict
    }
}

/// Number of random center points checked alongside the symbolic computation.
pub const CENTER_SAMPLES: usize = 5;

pub fn equimultiplicity_test(x: &PointedScheme, c: &Center) -> Result<EquimultVerdict> {
    let i = centered_on(x, c)?;
    let field = i.field();
    let origin = PointedScheme::at_origin(i.clone());
    let e = multiplicity_at_point(&origin)?;
    let fc = fiber_cone(&origin, c)?;
    let generic = generic_center_multiplicity(&fc.normal_cone_ideal, c)?;
    let mut samples = Vec::new();
    if !c.is_point() {
        let mut rng = random::rng();
        for _ in 0..CENTER_SAMPLES {
            let mut pt = vec![field.zero(); c.nvars()];
            for v in c.free_vars() {
                pt[v] = random::field_elem(&mut rng, field, 5);
            }
            let m = multiplicity_at_point(&PointedScheme::new(i.clone(), pt.clone())?)?;
            samples.push(SampledMultiplicity { point: pt.iter().map(|a| a.to_string()).collect(), multiplicity: m });
        }
    }
    let multiplicity_verdict = e == generic;
    let spread_verdict = fc.analytic_spread == fc.height;
    Ok(EquimultVerdict {
        multiplicity_at_point: e,
        generic_multiplicity: generic,
        samples,
        analytic_spread: fc.analytic_spread,
        height: fc.height,
        multiplicity_verdict,
        spread_verdict,
        agree: multiplicity_verdict == spread_verdict,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NilpotencyVerdict {
    pub fiber_in_cone_radical: bool,
    pub cone_in_fiber_radical: bool,
    pub nilpotent_kernel: bool,
    pub equimultiple: bool,
    pub agree: bool,
}

/// Compares the fiber cone (extended by the center's variables) with the tangent cone up
/// to radicals; equal radicals mean the kernel of the comparison map is nilpotent.
pub fn th211_check(x: &PointedScheme, c: &Center) -> Result<NilpotencyVerdict> {
    let origin = PointedScheme::at_origin(centered_on(x, c)?);
    let fc = fiber_cone(&origin, c)?.fiber_cone_ideal;
    let tc = hilbert_samuel_data(&origin, 0)?.tangent_cone_ideal;
    let fiber_in_cone_radical = tc.radical_contains_ideal(&fc)?;
    let cone_in_fiber_radical = fc.radical_contains_ideal(&tc)?;
    let nilpotent_kernel = fiber_in_cone_radical && cone_in_fiber_radical;
    let equimultiple = equimultiplicity_test(&origin, c)?.equimultiple();
    Ok(NilpotencyVerdict {
        fiber_in_cone_radical,
        cone_in_fiber_radical,
        nilpotent_kernel,
        equimultiple,
        agree: nilpotent_kernel == equimultiple,
    })
}

fn translated(gens: &[Poly], point: &[FieldElem]) -> Vec<Poly> {
    gens.iter().map(|g| g.translate(point)).collect()
}

/// Whether `<a>` is a reduction of `J` at the point: the fiber cone of `J` modulo the
/// classes of the `a_i` must be zero-dimensional.
pub fn reduction_test(a: &[Poly], j: &Ideal, point: &[FieldElem]) -> Result<bool> {
    let (field, n) = (j.field(), j.nvars());
    let jt = Ideal::new(field, n, translated(j.gens(), point));
    let at = translated(a, point);
    if jt.is_zero() || jt.gens().iter().any(|g| !g.constant_term().is_zero()) {
        return Err(Error::InvalidInput("J must be a proper nonzero ideal vanishing at the point".into()));
    }
    for g in &at {
        if !jt.contains(g)? {
            return Err(Error::Contract("a proposed reduction generator is not in J".into()));
        }
    }
    let gens: Vec<Poly> = jt.gens().iter().chain(at.iter()).cloned().collect();
    let s = gens.len();
    let big = n + s + 1;
    let t = Poly::var(field, big, big - 1);
    let rel: Vec<Poly> = gens
        .iter()
        .enumerate()
        .map(|(k, g)| Poly::var(field, big, n + k).sub(&g.extend_vars(s + 1).mul(&t)))
        .collect();
    let rees = Ideal::new(field, big, rel).elimination_ideal(&(0..n + s).collect::<Vec<_>>())?;
    let images: Vec<Poly> = (0..big)
        .map(|v| if (n..n + s).contains(&v) { Poly::var(field, s, v - n) } else { Poly::zero(field, s) })
        .collect();
    let mut fiber: Vec<Poly> = rees.gens().iter().map(|g| g.substitute(&images)).collect();
    fiber.extend((s - at.len()..s).map(|k| Poly::var(field, s, k)));
    Ok(Ideal::new(field, s, fiber).krull_dim()?.unwrap_or(0) == 0)
}

/// `e(I)` for an ideal primary to the point, from `Δ^n length(A / I^s)` at two consecutive `s`.
pub fn ideal_multiplicity(i: &Ideal, point: &[FieldElem]) -> Result<u64> {
    let (field, n) = (i.field(), i.nvars());
    let it = Ideal::new(field, n, translated(i.gens(), point));
    for v in 0..n {
        if !it.radical_contains(&Poly::var(field, n, v))? {
            return Err(Error::Contract("the ideal is not primary to the maximal ideal of the point".into()));
        }
    }
    let s_max = (n + 2).max(6);
    let mut lengths = vec![0i64];
    let mut power = Ideal::unit(field, n);
    for _ in 1..=s_max {
        let mut prod = Vec::new();
        for a in power.gens() {
            for b in it.gens() {
                prod.push(a.mul(b));
            }
        }
        power = Ideal::new(field, n, prod);
        power = Ideal::new(field, n, power.reduced_basis()?.to_vec());
        lengths.push(power.hilbert_series()?.degree());
    }
    let diff = |end: usize| -> i64 {
        let mut v: Vec<i64> = lengths[end - n..=end].to_vec();
        for _ in 0..n {
            v = v.windows(2).map(|w| w[1] - w[0]).collect();
        }
        v[0]
    };
    let (a, b) = (diff(s_max - 1), diff(s_max));
    if a != b || b <= 0 {
        return Err(Error::Inconclusive(format!("length fits disagree ({a} vs {b})")));
    }
    Ok(b as u64)
}

#[derive(Clone, Debug, Serialize)]
pub struct ReesReport {
    pub e_first: u64,
    pub e_second: u64,
    pub first_in_second: bool,
    pub second_in_first: bool,
    /// Set when the first ideal is contained in the second.
    pub first_reduces_second: Option<bool>,
    pub second_reduces_first: Option<bool>,
    pub consistent: bool,
}

/// For nested primary ideals, "reduction" and "equal multiplicity" must coincide.
pub fn rees_cross_check(i: &Ideal, j: &Ideal, point: &[FieldElem]) -> Result<ReesReport> {
    let e_first = ideal_multiplicity(i, point)?;
    let e_second = ideal_multiplicity(j, point)?;
    let first_in_second = j.contains_ideal(i)?;
    let second_in_first = i.contains_ideal(j)?;
    let first_reduces_second = if first_in_second { Some(reduction_test(i.gens(), j, point)?) } else { None };
    let second_reduces_first = if second_in_first { Some(reduction_test(j.gens(), i, point)?) } else { None };
    let same = e_first == e_second;
    let consistent = first_reduces_second.is_none_or(|r| r == same) && second_reduces_first.is_none_or(|r| r == same);
    Ok(ReesReport { e_first, e_second, first_in_second, second_in_first, first_reduces_second, second_reduces_first, consistent })
}

/// `theta` is in the `r`-th closure of the base prime `N` (a set of base variables) iff every
/// coefficient `a_i` of its minimal polynomial has `ord_N(a_i) / i >= r`.
pub fn integral_closure_membership(cover: &CoverPresentation, theta: &Poly, prime: &[usize], r: u32) -> Result<bool> {
    if prime.iter().any(|v| !cover.base_vars.contains(v)) {
        return Err(Error::InvalidInput("the prime must be generated by base variables".into()));
    }
    let mp = cover::minimal_polynomial(&cover.relation_ideal, &cover.base_vars, theta)
        .map_err(|e| Error::Contract(format!("theta has no monic minimal polynomial: {e}")))?;
    let n = cover.nvars;
    let mut mask = vec![false; n + 1];
    for &v in prime {
        mask[v] = true;
    }
    let coeffs = mp.poly.coefficients_in(n);
    let m = mp.degree as usize;
    Ok((1..=m).all(|i| match coeffs[m - i].order_along(&mask) {
        None => true,
        Some(nu) => nu / i as u32 >= r,
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalFlatnessReport {
    pub q: u32,
    pub prefixes: Vec<(Vec<u32>, Vec<u64>)>,
    pub hs_constant: bool,
    pub equimultiple: bool,
    /// Constancy of the Hilbert–Samuel function must imply equimultiplicity.
    pub consistent: bool,
}

/// Center points over `GF(q)` enumerated exhaustively below this count, sampled above it.
const CENTER_POINT_LIMIT: u64 = 64;

pub(crate) fn center_points(c: &Center, q: u32, samples: usize) -> Vec<Vec<u32>> {
    let free = c.free_vars();
    let total = (q as u64).checked_pow(free.len() as u32).unwrap_or(u64::MAX);
    let mut out = Vec::new();
    if total <= CENTER_POINT_LIMIT {
        for k in 0..total {
            let mut pt = vec![0u32; c.nvars()];
            let mut r = k;
            for &v in &free {
                pt[v] = (r % q as u64) as u32;
                r /= q as u64;
            }
            out.push(pt);
        }
    } else {
        use rand::Rng;
        let mut rng = random::rng();
        out.push(vec![0u32; c.nvars()]);
        for _ in 0..samples {
            let mut pt = vec![0u32; c.nvars()];
            for &v in &free {
                pt[v] = rng.gen_range(0..q);
            }
            out.push(pt);
        }
    }
    out
}

pub fn normal_flatness_sample_test(x: &PointedScheme, c: &Center, q: u32, n_max: u32) -> Result<NormalFlatnessReport> {
    let i = centered_on(x, c)?;
    let gens = cover::oracle_gens(&i, q)?;
    let fq = Field::prime(q)?;
    let mut prefixes = Vec::new();
    for pt in center_points(c, q, 8) {
        let l = oracle::hs_prefix(&gens, &oracle::point_elems(fq, &pt), n_max)?;
        prefixes.push((pt, l));
    }
    let hs_constant = prefixes.windows(2).all(|w| w[0].1 == w[1].1);
    let equimultiple = equimultiplicity_test(&PointedScheme::at_origin(i), c)?.equimultiple();
    Ok(NormalFlatnessReport { q, prefixes, hs_constant, equimultiple, consistent: !hs_constant || equimultiple })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    const Q: Field = Field::Rational;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn ideal(src: &[&str], vars: &[&str], f: Field) -> Ideal {
        let nm = names(vars);
        Ideal::new(f, vars.len(), src.iter().map(|s| parse_poly(s, &nm, f).unwrap()).collect())
    }

    fn at0(src: &[&str], vars: &[&str]) -> PointedScheme {
        PointedScheme::at_origin(ideal(src, vars, Q))
    }

    const XYZ: [&str; 3] = ["x", "y", "z"];

    #[test]
    fn fiber_cones() {
        let smooth = at0(&[], &["x", "y"]);
        let fc = fiber_cone(&smooth, &Center::new(2, &[0]).unwrap()).unwrap();
        assert_eq!((fc.analytic_spread, fc.height), (1, 1));
        let cusp = at0(&["x^2 - y^3"], &XYZ);
        let fc = fiber_cone(&cusp, &Center::new(3, &[0, 1]).unwrap()).unwrap();
        assert!(fc.fiber_cone_ideal.same_as(&ideal(&["x^2"], &XYZ, Q)).unwrap());
        assert_eq!((fc.analytic_spread, fc.height), (1, 1));
        let umbrella = at0(&["x^2 - y^2*z"], &XYZ);
        let fc = fiber_cone(&umbrella, &Center::new(3, &[0, 2]).unwrap()).unwrap();
        assert!(fc.normal_cone_ideal.same_as(&ideal(&["y^2*z"], &XYZ, Q)).unwrap());
        assert_eq!((fc.analytic_spread, fc.height), (2, 1));
    }

    #[test]
    fn equimultiplicity_verdicts() {
        let cusp = at0(&["x^2 - y^3"], &XYZ);
        let v = equimultiplicity_test(&cusp, &Center::new(3, &[0, 1]).unwrap()).unwrap();
        assert!(v.equimultiple() && v.agree);
        assert!(v.samples.iter().all(|s| s.multiplicity == 2));
        let umbrella = at0(&["x^2 - y^2*z"], &XYZ);
        let v = equimultiplicity_test(&umbrella, &Center::new(3, &[0, 2]).unwrap()).unwrap();
        assert_eq!((v.multiplicity_at_point, v.generic_multiplicity), (2, 1));
        assert!(!v.equimultiple() && v.agree);
        let z_axis = equimultiplicity_test(&umbrella, &Center::new(3, &[0, 1]).unwrap()).unwrap();
        assert!(z_axis.equimultiple() && z_axis.agree);
        let smooth = at0(&["z - x*y"], &XYZ);
        let v = equimultiplicity_test(&smooth, &Center::new(3, &[0, 2]).unwrap()).unwrap();
        assert!(v.equimultiple());
        assert!(equimultiplicity_test(&umbrella, &Center::new(3, &[1]).unwrap()).is_err());
    }

    #[test]
    fn nilpotent_kernel() {
        let cusp = at0(&["x^2 - y^3"], &XYZ);
        assert!(th211_check(&cusp, &Center::new(3, &[0, 1]).unwrap()).unwrap().nilpotent_kernel);
        let umbrella = at0(&["x^2 - y^2*z"], &XYZ);
        let v = th211_check(&umbrella, &Center::new(3, &[0, 2]).unwrap()).unwrap();
        assert!(!v.nilpotent_kernel && v.agree);
        let double = at0(&["x^2"], &XYZ);
        assert!(th211_check(&double, &Center::new(3, &[0, 1]).unwrap()).unwrap().nilpotent_kernel);
    }

    #[test]
    fn reductions() {
        let v = ["x", "y"];
        let nm = names(&v);
        let p = |s: &str| parse_poly(s, &nm, Q).unwrap();
        let m = ideal(&["x", "y"], &v, Q);
        let o = [Q.zero(), Q.zero()];
        assert!(reduction_test(&[p("x"), p("y")], &m, &o).unwrap());
        assert!(!reduction_test(&[p("x")], &m, &o).unwrap());
        assert!(reduction_test(&[p("x"), p("y + x^2")], &m, &o).unwrap());
        assert!(!reduction_test(&[p("x^2")], &m, &o).unwrap());
        assert!(reduction_test(&[p("x + 1")], &m, &o).is_err());
        let i = ideal(&["x^2", "y^2"], &v, Q);
        let j = ideal(&["x^2", "x*y", "y^2"], &v, Q);
        let r = rees_cross_check(&i, &j, &o).unwrap();
        assert_eq!((r.e_first, r.e_second, r.first_reduces_second, r.consistent), (4, 4, Some(true), true));
        let r = rees_cross_check(&i, &m, &o).unwrap();
        assert_eq!((r.e_first, r.e_second, r.first_reduces_second, r.consistent), (4, 1, Some(false), true));
        assert!(ideal_multiplicity(&ideal(&["x"], &v, Q), &o).is_err());
    }

    #[test]
    fn closure_membership() {
        let v = ["y", "V"];
        let cover = cover::build_cover(&ideal(&["V^2 - y"], &v, Q), Some(&[0])).unwrap();
        let nm = names(&v);
        let p = |s: &str| parse_poly(s, &nm, Q).unwrap();
        assert!(!integral_closure_membership(&cover, &p("V"), &[0], 1).unwrap());
        assert!(integral_closure_membership(&cover, &p("V"), &[0], 0).unwrap());
        assert!(integral_closure_membership(&cover, &p("V^2"), &[0], 1).unwrap());
        assert!(integral_closure_membership(&cover, &p("y*V"), &[0], 1).unwrap());
        assert!(!integral_closure_membership(&cover, &p("y*V"), &[0], 2).unwrap());
    }

    #[test]
    fn normal_flatness() {
        let cusp = at0(&["x^2 - y^3"], &XYZ);
        let r = normal_flatness_sample_test(&cusp, &Center::new(3, &[0, 1]).unwrap(), 7, 4).unwrap();
        assert!(r.hs_constant && r.equimultiple && r.consistent);
        let umbrella = at0(&["x^2 - y^2*z"], &XYZ);
        let r = normal_flatness_sample_test(&umbrella, &Center::new(3, &[0, 2]).unwrap(), 7, 4).unwrap();
        assert!(!r.hs_constant && r.consistent);
    }
}
