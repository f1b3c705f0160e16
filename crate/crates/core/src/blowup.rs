//! Blow-ups along coordinate centers: charts, strict transforms, exceptional fibers over
//! the distinguished point, Dade's inequality, fiber containment in the cone stratum, and
//! parallel sequences of blow-ups of a cover and its complete-intersection approximation.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cover::{self, CIScheme, CoverPresentation};
use crate::equimult::{center_points, equimultiplicity_test, EquimultVerdict};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::ideal::Ideal;
use crate::local::{
    multiplicity_at_point, tangent_cone_at_origin, tangent_cone_ideal, LinearChange, PointedScheme, SubspaceData,
};
use crate::monomial::Monomial;
use crate::oracle;
use crate::poly::Poly;
use crate::strata::{adapted_change, cone_stratum};

/// A coordinate subspace `V(x_i : i in cut)` through the origin of centred coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Center {
    nvars: usize,
    cut: Vec<usize>,
}

impl Center {
    pub fn new(nvars: usize, cut: &[usize]) -> Result<Center> {
        let mut cut = cut.to_vec();
        cut.sort_unstable();
        cut.dedup();
        if cut.is_empty() {
            return Err(Error::InvalidInput("a center needs at least one cutting variable".into()));
        }
        if cut.iter().any(|&v| v >= nvars) {
            return Err(Error::InvalidInput("cutting variable out of range".into()));
        }
        Ok(Center { nvars, cut })
    }

    /// The distinguished point itself.
    pub fn point(nvars: usize) -> Center {
        Center { nvars, cut: (0..nvars).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn cut(&self) -> &[usize] {
        &self.cut
    }

    pub fn is_point(&self) -> bool {
        self.cut.len() == self.nvars
    }

    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.nvars];
        for &v in &self.cut {
            m[v] = true;
        }
        m
    }

    pub fn free_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|v| !self.cut.contains(v)).collect()
    }

    /// `T_Y`, the center viewed as a subspace of the tangent space.
    pub fn tangent_space(&self, field: Field) -> SubspaceData {
        SubspaceData::coordinate(field, self.nvars, &self.cut)
    }

    pub fn ideal(&self, field: Field) -> Ideal {
        Ideal::new(field, self.nvars, self.cut.iter().map(|&v| Poly::var(field, self.nvars, v)).collect())
    }
}

/// Straightens a center given by linear forms through the point: returns the centred
/// scheme in coordinates where the forms span the first variables.
pub fn rectify_center(x: &PointedScheme, forms: &[Poly]) -> Result<(PointedScheme, Center, LinearChange)> {
    let (field, n) = (x.field(), x.nvars());
    if forms.iter().any(|f| !f.is_homogeneous() || f.degree() != Some(1)) {
        return Err(Error::InvalidInput("center forms must be linear forms in the centred coordinates".into()));
    }
    let s = SubspaceData::from_forms(field, n, forms)?;
    let change = adapted_change(&s);
    let moved = change.apply_ideal(&x.centered());
    let center = Center::new(n, &(0..s.codim()).collect::<Vec<_>>())?;
    Ok((PointedScheme::at_origin(moved), center, change))
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterCertificate {
    /// Oracle multiplicity at the point over `GF(q)`.
    pub multiplicity: u32,
    pub checked_points: usize,
    pub equimult: EquimultVerdict,
    /// Coordinate centers are regular.
    pub regular: bool,
}

/// Rejects centers off the scheme, centers along which the sampled multiplicity changes,
/// and centers failing the analytic-spread criterion.
pub fn validate_center(x: &PointedScheme, c: &Center, q: u32, n_max: u32) -> Result<CenterCertificate> {
    let i = x.centered();
    let mask = c.mask();
    if i.gens().iter().any(|g| g.order_along(&mask) == Some(0)) {
        return Err(Error::CenterRejected("the center is not contained in the scheme".into()));
    }
    let gens = cover::oracle_gens(&i, q)?;
    let fq = Field::prime(q)?;
    let e0 = oracle::mult_oracle(&gens, &oracle::point_elems(fq, &vec![0; c.nvars()]), n_max)? as u32;
    let pts = center_points(c, q, 24);
    for p in &pts {
        let m = oracle::mult_oracle(&gens, &oracle::point_elems(fq, p), n_max)? as u32;
        if m != e0 {
            return Err(Error::CenterRejected(format!(
                "pointwise multiplicity: {m} at center point {p:?} but {e0} at the distinguished point"
            )));
        }
    }
    let equimult = equimultiplicity_test(&PointedScheme::at_origin(i), c)?;
    if !equimult.agree {
        return Err(Error::TheoremViolation(format!(
            "multiplicity verdict {} disagrees with analytic spread verdict {}",
            equimult.multiplicity_verdict, equimult.spread_verdict
        )));
    }
    if !equimult.equimultiple() {
        return Err(Error::CenterRejected(format!(
            "analytic spread {} differs from height {}",
            equimult.analytic_spread, equimult.height
        )));
    }
    Ok(CenterCertificate { multiplicity: e0, checked_points: pts.len(), equimult, regular: true })
}

/// One affine chart: `x_i -> x_i x_t` for the other cutting variables.
#[derive(Clone, Debug)]
pub struct BlowupChart {
    pub index: usize,
    pub exceptional_var: usize,
    pub cut: Vec<usize>,
    pub images: Vec<Poly>,
}

#[derive(Clone, Debug)]
pub struct BlowupChartData {
    pub chart: BlowupChart,
    pub total_transform: Ideal,
    pub strict_transform: Ideal,
    /// Order along the center of each generator.
    pub order_drops: Vec<u32>,
}

pub fn blowup_charts(field: Field, c: &Center) -> Vec<BlowupChart> {
    let n = c.nvars();
    c.cut()
        .iter()
        .enumerate()
        .map(|(index, &t)| {
            let xt = Poly::var(field, n, t);
            let images = (0..n)
                .map(|v| {
                    let xv = Poly::var(field, n, v);
                    if v != t && c.cut().contains(&v) {
                        xv.mul(&xt)
                    } else {
                        xv
                    }
                })
                .collect();
            BlowupChart { index, exceptional_var: t, cut: c.cut().to_vec(), images }
        })
        .collect()
}

/// Substitutes and divides by `x_t^m`; `m` must be the order of `f` along the center.
pub fn strict_transform(f: &Poly, chart: &BlowupChart, m: u32) -> Result<Poly> {
    let n = f.nvars();
    f.substitute(&chart.images)
        .div_monomial(&Monomial::var(n, chart.exceptional_var, m))
        .ok_or(Error::Internal(format!("transform is not divisible by the exceptional variable to the power {m}")))
}

fn order_mask(chart: &BlowupChart, n: usize) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in &chart.cut {
        mask[v] = true;
    }
    mask
}

pub fn strict_transform_ideal(i: &Ideal, chart: &BlowupChart) -> Result<Ideal> {
    Ok(transform(i, chart)?.strict_transform)
}

pub fn transform(i: &Ideal, chart: &BlowupChart) -> Result<BlowupChartData> {
    let (field, n) = (i.field(), i.nvars());
    let mask = order_mask(chart, n);
    let total = i.map_polys(|g| g.substitute(&chart.images));
    let mut orders = Vec::new();
    let mut gens = Vec::new();
    for g in i.gens() {
        let m = g.order_along(&mask).unwrap_or(0);
        orders.push(m);
        gens.push(strict_transform(g, chart, m)?);
    }
    let xt = Poly::var(field, n, chart.exceptional_var);
    let sat = Ideal::new(field, n, gens).saturation(&xt)?;
    let strict = Ideal::new(field, n, sat.reduced_basis()?.to_vec());
    Ok(BlowupChartData { chart: chart.clone(), total_transform: total, strict_transform: strict, order_drops: orders })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberPoint {
    pub exceptional_var: usize,
    pub coords: Vec<u32>,
    /// Homogeneous coordinates over the cutting variables, first nonzero entry 1.
    pub projective: Vec<u32>,
    pub multiplicity: u32,
}

fn normalize(v: &[u32], q: u32) -> Vec<u32> {
    let f = Field::Prime(q);
    let lead = v.iter().find(|&&a| a != 0).copied().unwrap_or(1);
    let inv = f.from_i64(lead as i64).inv();
    v.iter().map(|&a| f.from_i64(a as i64).mul(&inv).residue().unwrap()).collect()
}

fn chart_fiber(data: &BlowupChartData, q: u32, n_max: u32) -> Result<Vec<FiberPoint>> {
    let chart = &data.chart;
    let n = data.strict_transform.nvars();
    if data.strict_transform.is_unit()? {
        return Ok(Vec::new());
    }
    let gens = cover::oracle_gens(&data.strict_transform, q)?;
    let fq = Field::prime(q)?;
    let free: Vec<usize> = chart.cut.iter().copied().filter(|&v| v != chart.exceptional_var).collect();
    let total = (q as u64).pow(free.len() as u32);
    let mut out = Vec::new();
    for k in 0..total {
        let mut coords = vec![0u32; n];
        let mut r = k;
        for &v in &free {
            coords[v] = (r % q as u64) as u32;
            r /= q as u64;
        }
        let pt = oracle::point_elems(fq, &coords);
        if gens.iter().any(|g| !g.evaluate(&pt).is_zero()) {
            continue;
        }
        let m = oracle::mult_oracle(&gens, &pt, n_max)? as u32;
        let raw: Vec<u32> = chart.cut.iter().map(|&v| if v == chart.exceptional_var { 1 } else { coords[v] }).collect();
        out.push(FiberPoint { exceptional_var: chart.exceptional_var, coords, projective: normalize(&raw, q), multiplicity: m });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct FiberReport {
    pub q: u32,
    pub source_multiplicity: u32,
    pub charts: Vec<BlowupChartData>,
    /// Every fiber point found, chart by chart.
    pub points: Vec<FiberPoint>,
    /// One representative per projective point, from the first chart containing it.
    pub distinct: Vec<FiberPoint>,
    /// Multiplicities agree wherever two charts see the same point.
    pub gluing_consistent: bool,
    pub max_multiplicity: Option<u32>,
}

/// Exceptional fibers of the strict transform over the distinguished point, over `GF(q)`.
pub fn exceptional_fibers(x: &PointedScheme, c: &Center, q: u32, n_max: u32) -> Result<FiberReport> {
    let i = x.centered();
    let fq = Field::prime(q)?;
    let source = oracle::mult_oracle(&cover::oracle_gens(&i, q)?, &oracle::point_elems(fq, &vec![0; c.nvars()]), n_max)?;
    let mut charts = Vec::new();
    let mut points = Vec::new();
    for chart in blowup_charts(i.field(), c) {
        let data = transform(&i, &chart)?;
        points.extend(chart_fiber(&data, q, n_max)?);
        charts.push(data);
    }
    let mut classes: BTreeMap<Vec<u32>, Vec<&FiberPoint>> = BTreeMap::new();
    for p in &points {
        classes.entry(p.projective.clone()).or_default().push(p);
    }
    let gluing_consistent = classes.values().all(|ps| ps.iter().all(|p| p.multiplicity == ps[0].multiplicity));
    let distinct: Vec<FiberPoint> = classes.values().map(|ps| ps[0].clone()).collect();
    let max_multiplicity = points.iter().map(|p| p.multiplicity).max();
    Ok(FiberReport { q, source_multiplicity: source as u32, charts, points, distinct, gluing_consistent, max_multiplicity })
}

#[derive(Clone, Debug)]
pub struct DadeReport {
    pub certificate: CenterCertificate,
    pub fibers: FiberReport,
    pub violation: Option<FiberPoint>,
    pub dropped: bool,
    pub pass: bool,
}

/// No point of the exceptional fiber may exceed the multiplicity at the point.
pub fn dade_check(x: &PointedScheme, c: &Center, q: u32, n_max: u32) -> Result<DadeReport> {
    let certificate = validate_center(x, c, q, n_max)?;
    let fibers = exceptional_fibers(x, c, q, n_max)?;
    let e = fibers.source_multiplicity;
    let violation = fibers.points.iter().find(|p| p.multiplicity > e).cloned();
    let dropped = fibers.max_multiplicity.is_none_or(|m| m < e);
    let pass = violation.is_none() && fibers.gluing_consistent;
    Ok(DadeReport { certificate, fibers, violation, dropped, pass })
}

#[derive(Clone, Debug)]
pub struct ContainmentReport {
    /// The cone stratum `S` of the tangent cone at the point.
    pub stratum: SubspaceData,
    pub center_space: SubspaceData,
    pub fibers: FiberReport,
    /// Fiber points keeping the multiplicity of the point.
    pub persistent: Vec<FiberPoint>,
    /// Persistent points outside `Proj(S / T_Y)`; must be empty.
    pub outside: Vec<FiberPoint>,
    pub pass: bool,
}

/// Every persistent fiber point lies in `Proj(S / T_Y)`.
pub fn fiber_containment_check(x: &PointedScheme, c: &Center, q: u32, n_max: u32) -> Result<ContainmentReport> {
    validate_center(x, c, q, n_max)?;
    let field = x.field();
    let stratum = cone_stratum(&tangent_cone_ideal(x)?, None)?.stratum;
    let center_space = c.tangent_space(field);
    if !stratum.contains(&center_space) {
        return Err(Error::Contract("the center's tangent space is not inside the cone stratum".into()));
    }
    let fibers = exceptional_fibers(x, c, q, n_max)?;
    let fq = Field::prime(q)?;
    let forms: Vec<Poly> = stratum.cutting_forms().iter().map(|f| f.map_field(fq)).collect::<Result<_>>()?;
    let persistent: Vec<FiberPoint> =
        fibers.distinct.iter().filter(|p| p.multiplicity == fibers.source_multiplicity).cloned().collect();
    let outside: Vec<FiberPoint> = persistent
        .iter()
        .filter(|p| {
            let mut v = vec![0u32; c.nvars()];
            for (k, &var) in c.cut().iter().enumerate() {
                v[var] = p.projective[k];
            }
            let pt = oracle::point_elems(fq, &v);
            forms.iter().any(|f| !f.evaluate(&pt).is_zero())
        })
        .cloned()
        .collect();
    let pass = outside.is_empty();
    Ok(ContainmentReport { stratum, center_space, fibers, persistent, outside, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceStage {
    pub stage: usize,
    /// Exceptional variables of the charts followed so far.
    pub path: Vec<usize>,
    pub top_b: Vec<Vec<u32>>,
    pub top_ci: Vec<Vec<u32>>,
    pub locus: Vec<Vec<u32>>,
    pub sets_equal: bool,
    pub max_multiplicity: Option<u32>,
    pub non_increasing: bool,
    /// Multiplicity of the current scheme at the chart origin, if the origin lies on it.
    pub origin_multiplicity: Option<u64>,
    pub persistent: bool,
    /// Local dimension at the origin of the top locus, recorded at persistent stages.
    pub locus_local_dim: Option<usize>,
    pub dim_audit: bool,
    pub monic_transforms: bool,
    pub ci_transform_agrees: bool,
    pub note: Option<String>,
}

impl SequenceStage {
    pub fn pass(&self) -> bool {
        self.sets_equal && self.non_increasing && self.dim_audit && self.monic_transforms && self.ci_transform_agrees
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceReport {
    pub q: u32,
    pub generic_rank: u64,
    pub d_product: u64,
    pub source_multiplicity: u64,
    /// `D(x)`: dimension of the cone stratum at the origin.
    pub stratum_dim: usize,
    pub stages: Vec<SequenceStage>,
    pub pass: bool,
}

struct Node {
    b: Ideal,
    hyps: Vec<Poly>,
    path: Vec<usize>,
    max_mult: Option<u32>,
    /// Strict transform of the parent's `B'` computed by saturation.
    ci_saturated: Option<Ideal>,
}

fn hyps_ideal(hyps: &[Poly], field: Field, n: usize) -> Ideal {
    Ideal::new(field, n, hyps.to_vec())
}

fn is_monic_in(h: &Poly, var: usize, d: u32) -> bool {
    h.degree_in(var) == Some(d) && h.coefficients_in(var)[d as usize].constant_term().is_one() && h.coefficients_in(var)[d as usize].is_constant()
}

/// Blows up `B` and `B'` in parallel along the given centers, following every chart path of
/// base charts, and audits each stage.
pub fn run_sequence(
    cov: &CoverPresentation,
    ci: &CIScheme,
    centers: &[Center],
    q: u32,
    n_max: u32,
    depth: usize,
) -> Result<SequenceReport> {
    let (field, n) = (cov.field, cov.nvars);
    let origin = PointedScheme::at_origin(cov.relation_ideal.clone());
    let e = multiplicity_at_point(&origin)?;
    let stratum_dim = cone_stratum(&tangent_cone_at_origin(&cov.relation_ideal)?, None)?.stratum.dim();
    let mut stages = Vec::new();
    let root =
        Node { b: cov.relation_ideal.clone(), hyps: ci.hypersurfaces.clone(), path: vec![], max_mult: None, ci_saturated: None };
    let mut frontier = vec![root];
    let steps = centers.len().min(depth);
    for stage in 0..=steps {
        let mut next = Vec::new();
        for node in frontier {
            let mut st = audit_stage(cov, ci, &node, stage, e, stratum_dim, q, n_max)?;
            let max_mult = st.max_multiplicity;
            if stage < steps {
                let c = &centers[stage];
                let locus = cover::theorem16_locus(&stage_ci(ci, &node.hyps, field, n));
                let inside = locus.gens().iter().all(|g| g.order_along(&c.mask()).is_none_or(|o| o >= 1));
                if !inside {
                    if stage == 0 {
                        return Err(Error::CenterRejected("the first center is not inside the top stratum".into()));
                    }
                    st.note = Some("center leaves the top stratum; path ends".into());
                } else {
                    for chart in blowup_charts(field, c) {
                        if !cov.base_vars.contains(&chart.exceptional_var) {
                            continue;
                        }
                        let b = strict_transform_ideal(&node.b, &chart)?;
                        let mask = order_mask(&chart, n);
                        let hyps: Vec<Poly> = node
                            .hyps
                            .iter()
                            .map(|h| strict_transform(h, &chart, h.order_along(&mask).unwrap_or(0)))
                            .collect::<Result<_>>()?;
                        let ci_saturated = Some(strict_transform_ideal(&hyps_ideal(&node.hyps, field, n), &chart)?);
                        let mut path = node.path.clone();
                        path.push(chart.exceptional_var);
                        next.push(Node { b, hyps, path, max_mult, ci_saturated });
                    }
                }
            }
            stages.push(st);
        }
        frontier = next;
    }
    let pass = stages.iter().all(|s| s.pass());
    Ok(SequenceReport {
        q,
        generic_rank: cov.generic_rank,
        d_product: ci.d_product,
        source_multiplicity: e,
        stratum_dim,
        stages,
        pass,
    })
}

fn stage_ci(ci: &CIScheme, hyps: &[Poly], field: Field, n: usize) -> CIScheme {
    CIScheme { ideal: hyps_ideal(hyps, field, n), hypersurfaces: hyps.to_vec(), degrees: ci.degrees.clone(), d_product: ci.d_product }
}

#[allow(clippy::too_many_arguments)]
fn audit_stage(
    cov: &CoverPresentation,
    ci: &CIScheme,
    node: &Node,
    stage: usize,
    e: u64,
    stratum_dim: usize,
    q: u32,
    n_max: u32,
) -> Result<SequenceStage> {
    let (field, n) = (cov.field, cov.nvars);
    let mut cov_i = cov.clone();
    cov_i.relation_ideal = node.b.clone();
    cov_i.min_polys = node.hyps.clone();
    let ci_i = stage_ci(ci, &node.hyps, field, n);
    let sets = cover::verify_locus_equality(&cov_i, &ci_i, q, n_max)?;
    let zero: Vec<FieldElem> = vec![field.zero(); n];
    let on_origin = node.b.gens().iter().all(|g| g.evaluate(&zero).is_zero()) && !node.b.is_unit()?;
    let origin_multiplicity = if on_origin { Some(multiplicity_at_point(&PointedScheme::at_origin(node.b.clone()))?) } else { None };
    let persistent = origin_multiplicity == Some(e);
    let mut locus_local_dim = None;
    let mut note = None;
    if persistent {
        if e == cov.generic_rank {
            let locus = cover::theorem16_locus(&ci_i);
            locus_local_dim = tangent_cone_at_origin(&locus)?.krull_dim()?;
        } else {
            note = Some("multiplicity below the generic rank; dimension audit not applicable".into());
        }
    }
    let dim_audit = locus_local_dim.is_none_or(|d| d <= stratum_dim);
    let monic_transforms = cov
        .fiber_vars
        .iter()
        .zip(&node.hyps)
        .zip(&ci.degrees)
        .all(|((&v, h), &d)| is_monic_in(h, v, d));
    // per-generator transforms must cut out the saturated strict transform of B'
    let ci_transform_agrees = match &node.ci_saturated {
        None => true,
        Some(sat) => sat.radical_contains_ideal(&ci_i.ideal)? && ci_i.ideal.radical_contains_ideal(sat)?,
    };
    Ok(SequenceStage {
        stage,
        path: node.path.clone(),
        non_increasing: match (node.max_mult, sets.max_mult_b) {
            (Some(p), Some(m)) => m <= p,
            _ => true,
        },
        max_multiplicity: sets.max_mult_b,
        top_b: sets.top_b,
        top_ci: sets.top_ci,
        locus: sets.locus,
        sets_equal: sets.equal,
        origin_multiplicity,
        persistent,
        locus_local_dim,
        dim_audit,
        monic_transforms,
        ci_transform_agrees,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    const Q: Field = Field::Rational;
    const XYZ: [&str; 3] = ["x", "y", "z"];

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn poly(s: &str, vars: &[&str]) -> Poly {
        parse_poly(s, &names(vars), Q).unwrap()
    }

    fn at0(src: &[&str], vars: &[&str]) -> PointedScheme {
        PointedScheme::at_origin(Ideal::new(Q, vars.len(), src.iter().map(|s| poly(s, vars)).collect()))
    }

    fn chart_for(c: &Center, t: usize) -> BlowupChart {
        blowup_charts(Q, c).into_iter().find(|ch| ch.exceptional_var == t).unwrap()
    }

    #[test]
    fn charts_and_transforms() {
        assert_eq!(blowup_charts(Q, &Center::point(3)).len(), 3);
        let divisor = &blowup_charts(Q, &Center::new(3, &[1]).unwrap())[0];
        assert_eq!(divisor.images, (0..3).map(|v| Poly::var(Q, 3, v)).collect::<Vec<_>>());
        let zaxis = Center::new(3, &[0, 1]).unwrap();
        let f = poly("x^2 - y^3", &XYZ);
        assert_eq!(strict_transform(&f, &chart_for(&zaxis, 1), 2).unwrap(), poly("x^2 - y", &XYZ));
        assert_eq!(strict_transform(&f, &chart_for(&zaxis, 0), 2).unwrap(), poly("1 - x*y^3", &XYZ));
        assert!(strict_transform(&f, &chart_for(&zaxis, 0), 3).is_err());
        let g = poly("x^2 - y^2*z", &XYZ);
        assert_eq!(strict_transform(&g, &chart_for(&Center::point(3), 2), 2).unwrap(), g);
        let xt = Ideal::new(Q, 3, vec![poly("z*(x - y)", &XYZ)]);
        let s = strict_transform_ideal(&xt, &blowup_charts(Q, &Center::new(3, &[2]).unwrap())[0]).unwrap();
        assert!(s.same_as(&Ideal::new(Q, 3, vec![poly("x - y", &XYZ)])).unwrap());
    }

    #[test]
    fn ci_transform_matches_generator_transforms() {
        let vars = ["x", "y", "z"];
        let ci = Ideal::new(Q, 3, vec![poly("y^3 - x^4", &vars), poly("z^3 - x^5", &vars)]);
        let chart = chart_for(&Center::point(3), 0);
        let sat = strict_transform_ideal(&ci, &chart).unwrap();
        let gens = Ideal::new(Q, 3, vec![poly("y^3 - x", &vars), poly("z^3 - x^2", &vars)]);
        assert!(sat.same_as(&gens).unwrap());
    }

    #[test]
    fn center_validation() {
        let cusp = at0(&["x^2 - y^3"], &XYZ);
        assert!(validate_center(&cusp, &Center::new(3, &[0, 1]).unwrap(), 7, 8).is_ok());
        let umbrella = at0(&["x^2 - y^2*z"], &XYZ);
        let err = validate_center(&umbrella, &Center::new(3, &[0, 2]).unwrap(), 7, 8).unwrap_err();
        assert_eq!(err.code(), "E_CENTER");
        assert!(validate_center(&umbrella, &Center::point(3), 7, 8).is_ok());
        assert!(validate_center(&umbrella, &Center::new(3, &[1]).unwrap(), 7, 8).is_err());
    }

    #[test]
    fn dade_examples() {
        let cusp = at0(&["x^2 - y^3"], &XYZ);
        let r = dade_check(&cusp, &Center::new(3, &[0, 1]).unwrap(), 7, 8).unwrap();
        assert!(r.pass && r.dropped);
        assert!(r.fibers.points.iter().all(|p| p.multiplicity == 1));
        let umbrella = at0(&["x^2 - y^2*z"], &XYZ);
        let r = dade_check(&umbrella, &Center::point(3), 7, 8).unwrap();
        assert!(r.pass && !r.dropped && r.fibers.gluing_consistent);
        assert_eq!(r.fibers.max_multiplicity, Some(2));
        let smooth = at0(&["z - x*y"], &XYZ);
        let r = dade_check(&smooth, &Center::point(3), 7, 8).unwrap();
        assert!(r.pass && r.fibers.points.iter().all(|p| p.multiplicity == 1));
    }

    #[test]
    fn containment_examples() {
        let umbrella = at0(&["x^2 - y^2*z"], &XYZ);
        let r = fiber_containment_check(&umbrella, &Center::point(3), 7, 8).unwrap();
        assert_eq!(r.stratum, SubspaceData::coordinate(Q, 3, &[0]));
        let proj: Vec<Vec<u32>> = r.persistent.iter().map(|p| p.projective.clone()).collect();
        assert_eq!(proj, vec![vec![0, 0, 1], vec![0, 1, 0]]);
        assert!(r.pass);
        let cusp = at0(&["x^2 - y^3"], &XYZ);
        let r = fiber_containment_check(&cusp, &Center::new(3, &[0, 1]).unwrap(), 7, 8).unwrap();
        assert!(r.persistent.is_empty() && r.pass);
        let double = at0(&["x^2"], &XYZ);
        let r = fiber_containment_check(&double, &Center::point(3), 5, 8).unwrap();
        assert_eq!(r.persistent.len(), r.fibers.distinct.len());
        assert!(r.pass);
    }

    #[test]
    fn sequences() {
        let f7 = Field::Prime(7);
        let vars = names(&XYZ);
        let j = Ideal::new(f7, 3, vec![parse_poly("x^2 - y^2*z", &vars, f7).unwrap()]);
        let cov = cover::build_cover(&j, Some(&[1, 2])).unwrap();
        let ci = cover::ci_approximation(&cov).unwrap();
        let origin = Center::point(3);
        let r = run_sequence(&cov, &ci, &[origin.clone(), origin.clone()], 7, 8, 3).unwrap();
        assert!(r.pass);
        assert_eq!(r.stratum_dim, 2);
        let zz = r.stages.iter().find(|s| s.path == vec![2, 2]).unwrap();
        assert!(zz.persistent);
        assert_eq!(zz.locus_local_dim, Some(1));
        let r0 = run_sequence(&cov, &ci, &[], 7, 8, 3).unwrap();
        assert_eq!(r0.stages.len(), 1);
        assert!(r0.stages[0].sets_equal);
    }
}
