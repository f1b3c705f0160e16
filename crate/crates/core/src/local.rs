//! Local invariants at a rational point: order, tangent cone, Hilbert–Samuel lengths,
//! multiplicity, Zariski tangent space and the τ-invariant.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::hilbert::HilbertSeries;
use crate::ideal::Ideal;
use crate::linalg;
use crate::monomial::Monomial;
use crate::order::MonomialOrder;
use crate::poly::Poly;

/// An ideal together with a rational point on its zero set.
#[derive(Clone, Debug)]
pub struct PointedScheme {
    pub ideal: Ideal,
    pub point: Vec<FieldElem>,
}

impl PointedScheme {
    pub fn new(ideal: Ideal, point: Vec<FieldElem>) -> Result<Self> {
        if point.len() != ideal.nvars() {
            return Err(Error::InvalidInput(format!("point has {} coordinates, ring has {}", point.len(), ideal.nvars())));
        }
        for g in ideal.gens() {
            if !g.evaluate(&point).is_zero() {
                return Err(Error::InvalidInput("point does not lie on the scheme".into()));
            }
        }
        Ok(PointedScheme { ideal, point })
    }

    pub fn at_origin(ideal: Ideal) -> Self {
        let point = vec![ideal.field().zero(); ideal.nvars()];
        PointedScheme { ideal, point }
    }

    pub fn field(&self) -> Field {
        self.ideal.field()
    }

    pub fn nvars(&self) -> usize {
        self.ideal.nvars()
    }

    /// The same scheme with the point moved to the origin.
    pub fn centered(&self) -> Ideal {
        self.ideal.map_polys(|g| g.translate(&self.point))
    }
}

/// Order of `f` at `p`: the minimal degree of `f(x + p)`.
pub fn order_at_point(f: &Poly, p: &[FieldElem]) -> Result<u32> {
    f.translate(p).min_degree().ok_or(Error::UndefinedOrder)
}

/// `h^{deg f} f(x/h)` in one extra trailing variable `h`.
pub fn homogenize(f: &Poly) -> Poly {
    let n = f.nvars();
    let d = f.degree().unwrap_or(0);
    let mut r = Poly::zero(f.field(), n + 1);
    for (m, c) in f.terms() {
        let mut e: Vec<u32> = m.exponents().collect();
        e.push(d - m.degree());
        r.add_term(Monomial::from_exponents(&e), c.clone());
    }
    r
}

/// Degree-compatible order on `k[x, h]` preferring high powers of `h`; dehomogenized it
/// becomes a local degree order.
fn lazard_order(n: usize) -> MonomialOrder {
    let mut eh = vec![0u32; n + 1];
    eh[n] = 1;
    MonomialOrder::weighted(vec![1; n + 1], MonomialOrder::weighted(eh, MonomialOrder::Grevlex))
}

/// Ideal of initial forms `in_0(I)` of an ideal already centred at the origin.
pub fn tangent_cone_at_origin(ideal: &Ideal) -> Result<Ideal> {
    let n = ideal.nvars();
    let f = ideal.field();
    if ideal.is_zero() {
        return Ok(ideal.clone());
    }
    let hom = Ideal::new(f, n + 1, ideal.gens().iter().map(homogenize).collect());
    let gb = hom.groebner(&lazard_order(n))?;
    let mut dehom = Vec::with_capacity(gb.len());
    let mut point = vec![Poly::one(f, n); n + 1];
    for (i, img) in point.iter_mut().enumerate().take(n) {
        *img = Poly::var(f, n, i);
    }
    for g in gb.iter() {
        dehom.push(g.substitute(&point).lowest_form());
    }
    let cone = Ideal::new(f, n, dehom);
    let basis = cone.reduced_basis()?;
    Ok(Ideal::new(f, n, basis.to_vec()))
}

pub fn tangent_cone_ideal(x: &PointedScheme) -> Result<Ideal> {
    tangent_cone_at_origin(&x.centered())
}

#[derive(Clone, Debug)]
pub struct HilbertSamuelData {
    pub tangent_cone_ideal: Ideal,
    pub dimension: usize,
    pub hs_numerator: Vec<i64>,
    pub multiplicity: u64,
    pub hs_prefix: Vec<u64>,
}

/// Hilbert series of a homogeneous ideal; a contract error otherwise.
pub fn graded_hilbert_series(cone: &Ideal) -> Result<HilbertSeries> {
    if !cone.is_homogeneous() {
        return Err(Error::Contract("Hilbert series requested for a non-homogeneous ideal".into()));
    }
    cone.hilbert_series()
}

pub fn hilbert_samuel_data(x: &PointedScheme, n_max: u32) -> Result<HilbertSamuelData> {
    let cone = tangent_cone_ideal(x)?;
    let hs = graded_hilbert_series(&cone)?;
    if hs.degree() <= 0 {
        return Err(Error::InvalidInput("the point is not on the scheme".into()));
    }
    let prefix = hs.cumulative(n_max).into_iter().map(|v| v as u64).collect();
    Ok(HilbertSamuelData {
        tangent_cone_ideal: cone,
        dimension: hs.dim,
        multiplicity: hs.degree() as u64,
        hs_numerator: hs.numerator,
        hs_prefix: prefix,
    })
}

/// `l(n)` for `n = 0..=n_max`, as partial sums of the tangent cone's Hilbert function.
pub fn hilbert_samuel_function(x: &PointedScheme, n_max: u32) -> Result<Vec<u64>> {
    Ok(hilbert_samuel_data(x, n_max)?.hs_prefix)
}

/// `e = N(1)` for the tangent-cone Hilbert series. Pure-dimensionality is the caller's assumption.
pub fn multiplicity_at_point(x: &PointedScheme) -> Result<u64> {
    Ok(hilbert_samuel_data(x, 0)?.multiplicity)
}

/// A linear subspace through the origin, stored as independent cutting forms in
/// reduced row-echelon form (so equal subspaces print identically).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceData {
    pub field: Field,
    pub nvars: usize,
    rows: Vec<Vec<FieldElem>>,
}

impl SubspaceData {
    pub fn from_rows(field: Field, nvars: usize, rows: Vec<Vec<FieldElem>>) -> Self {
        let mut rows = rows;
        linalg::rref(field, &mut rows, nvars);
        SubspaceData { field, nvars, rows }
    }

    pub fn whole(field: Field, nvars: usize) -> Self {
        SubspaceData { field, nvars, rows: Vec::new() }
    }

    pub fn origin(field: Field, nvars: usize) -> Self {
        let rows = (0..nvars).map(|i| unit_vector(field, nvars, i)).collect();
        Self::from_rows(field, nvars, rows)
    }

    /// `V(x_i : i in vars)`.
    pub fn coordinate(field: Field, nvars: usize, vars: &[usize]) -> Self {
        Self::from_rows(field, nvars, vars.iter().map(|&i| unit_vector(field, nvars, i)).collect())
    }

    /// Subspace cut out by linear forms; errors on non-linear input.
    pub fn from_forms(field: Field, nvars: usize, forms: &[Poly]) -> Result<Self> {
        let rows = forms.iter().map(linear_coefficients).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_rows(field, nvars, rows))
    }

    pub fn dim(&self) -> usize {
        self.nvars - self.rows.len()
    }

    pub fn codim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<FieldElem>] {
        &self.rows
    }

    pub fn cutting_forms(&self) -> Vec<Poly> {
        self.rows.iter().map(|r| form_from_row(self.field, r)).collect()
    }

    /// A basis of the subspace itself (direction vectors).
    pub fn basis(&self) -> Vec<Vec<FieldElem>> {
        linalg::nullspace(self.field, &self.rows, self.nvars)
    }

    pub fn contains_point(&self, p: &[FieldElem]) -> bool {
        self.rows.iter().all(|r| dot(r, p).is_zero())
    }

    pub fn contains(&self, other: &SubspaceData) -> bool {
        other.basis().iter().all(|v| self.contains_point(v))
    }

    pub fn intersect(&self, other: &SubspaceData) -> SubspaceData {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Self::from_rows(self.field, self.nvars, rows)
    }

    /// Sum of subspaces: the common zeros of forms vanishing on both.
    pub fn sum(&self, other: &SubspaceData) -> SubspaceData {
        let mut basis = self.basis();
        basis.extend(other.basis());
        let rows = linalg::nullspace(self.field, &basis, self.nvars);
        Self::from_rows(self.field, self.nvars, rows)
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.rows.is_empty() {
            return "whole space".to_string();
        }
        let forms: Vec<String> = self.cutting_forms().iter().map(|f| f.fmt_with(names)).collect();
        format!("V({})", forms.join(", "))
    }
}

pub(crate) fn unit_vector(field: Field, n: usize, i: usize) -> Vec<FieldElem> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

pub(crate) fn dot(a: &[FieldElem], b: &[FieldElem]) -> FieldElem {
    let f = a[0].field();
    a.iter().zip(b).fold(f.zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

pub(crate) fn form_from_row(field: Field, row: &[FieldElem]) -> Poly {
    let n = row.len();
    let mut p = Poly::zero(field, n);
    for (i, c) in row.iter().enumerate() {
        p.add_term(Monomial::var(n, i, 1), c.clone());
    }
    p
}

pub(crate) fn linear_coefficients(f: &Poly) -> Result<Vec<FieldElem>> {
    let n = f.nvars();
    let mut row = vec![f.field().zero(); n];
    for (m, c) in f.terms() {
        if m.degree() != 1 {
            return Err(Error::NonLinearStratum(format!("form {f} is not linear homogeneous")));
        }
        row[m.support().next().unwrap()] = c.clone();
    }
    Ok(row)
}

/// `x = A x'`: variable `i` is replaced by `sum_j A[i][j] x_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearChange {
    pub field: Field,
    pub matrix: Vec<Vec<FieldElem>>,
}

impl LinearChange {
    pub fn identity(field: Field, n: usize) -> Self {
        LinearChange { field, matrix: (0..n).map(|i| unit_vector(field, n, i)).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.field, self.nvars())
    }

    pub fn images(&self) -> Vec<Poly> {
        self.matrix.iter().map(|r| form_from_row(self.field, r)).collect()
    }

    /// `f(A x)`.
    pub fn apply(&self, f: &Poly) -> Poly {
        f.substitute(&self.images())
    }

    pub fn apply_ideal(&self, i: &Ideal) -> Ideal {
        let imgs = self.images();
        i.map_polys(|g| g.substitute(&imgs))
    }

    /// `A v` for a point `v` in the new coordinates.
    pub fn map_point(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        self.matrix.iter().map(|r| dot(r, v)).collect()
    }

    pub fn inverse(&self) -> Result<LinearChange> {
        let n = self.nvars();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let e = unit_vector(self.field, n, j);
            let c = linalg::solve(self.field, &self.matrix, &e, n).ok_or(Error::Internal("singular linear change".into()))?;
            cols.push(c);
        }
        let matrix = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
        Ok(LinearChange { field: self.field, matrix })
    }

    pub fn is_invertible(&self) -> bool {
        linalg::rank(self.field, &self.matrix, self.nvars()) == self.nvars()
    }

    /// Subspace `S` in old coordinates pulled back to new coordinates: forms `l(A x')`.
    pub fn pull_back(&self, s: &SubspaceData) -> SubspaceData {
        let forms: Vec<Poly> = s.cutting_forms().iter().map(|f| self.apply(f)).collect();
        SubspaceData::from_forms(self.field, s.nvars, &forms).expect("linear forms stay linear")
    }
}

/// Kernel of the Jacobian at the point, as cutting forms.
pub fn zariski_tangent_space(x: &PointedScheme) -> SubspaceData {
    let n = x.nvars();
    let rows: Vec<Vec<FieldElem>> = x
        .centered()
        .gens()
        .iter()
        .map(|g| linear_coefficients(&g.homogeneous_part(1)).unwrap())
        .collect();
    SubspaceData::from_rows(x.field(), n, rows)
}

/// `τ`: the codimension of the stratum subspace of the tangent cone.
pub fn tau_invariant(x: &PointedScheme) -> Result<usize> {
    let cone = tangent_cone_ideal(x)?;
    Ok(crate::strata::cone_stratum(&cone, None)?.tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::parse::parse_poly;

    fn scheme(src: &[&str], vars: &[&str], f: Field, pt: &[i64]) -> PointedScheme {
        let names: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        let gens = src.iter().map(|s| parse_poly(s, &names, f).unwrap()).collect();
        PointedScheme::new(Ideal::new(f, vars.len(), gens), pt.iter().map(|&c| f.from_i64(c)).collect()).unwrap()
    }

    const Q: Field = Field::Rational;
    const XYZ: [&str; 3] = ["x", "y", "z"];

    #[test]
    fn orders() {
        let x = scheme(&["x^2 - y^2*z"], &XYZ, Q, &[0, 0, 0]);
        let f = &x.ideal.gens()[0];
        let at = |p: &[i64]| order_at_point(f, &p.iter().map(|&c| Q.from_i64(c)).collect::<Vec<_>>()).unwrap();
        assert_eq!(at(&[0, 0, 0]), 2);
        assert_eq!(at(&[0, 3, 0]), 1);
        assert_eq!(at(&[0, 0, 5]), 2);
        assert_eq!(order_at_point(&Poly::zero(Q, 2), &[Q.zero(), Q.zero()]), Err(Error::UndefinedOrder));
    }

    #[test]
    fn tangent_cones() {
        let names: Vec<String> = XYZ.iter().map(|s| s.to_string()).collect();
        let x = scheme(&["x^2 - y^2*z"], &XYZ, Q, &[0, 0, 0]);
        assert_eq!(tangent_cone_ideal(&x).unwrap().fmt_with(&names), "<x^2>");
        let curve = scheme(&["y^2 - x*z", "x^3 - y*z", "z^2 - x^2*y"], &XYZ, Q, &[0, 0, 0]);
        let hs = hilbert_samuel_data(&curve, 3).unwrap();
        assert!(hs.tangent_cone_ideal.is_homogeneous());
        assert_eq!((hs.multiplicity, hs.dimension), (3, 1));
        assert_eq!(hs.hs_prefix, vec![1, 4, 7, 10]);
    }

    #[test]
    fn hilbert_samuel_examples() {
        let smooth = scheme(&["y - x^2"], &["x", "y"], Q, &[0, 0]);
        assert_eq!(hilbert_samuel_function(&smooth, 2).unwrap(), vec![1, 2, 3]);
        let cusp = scheme(&["x^2 - y^3"], &["x", "y"], Q, &[0, 0]);
        assert_eq!(hilbert_samuel_function(&cusp, 3).unwrap(), vec![1, 3, 5, 7]);
        let umb = scheme(&["x^2 - y^2*z"], &XYZ, Q, &[0, 0, 0]);
        assert_eq!(hilbert_samuel_function(&umb, 2).unwrap(), vec![1, 4, 9]);
        assert_eq!(multiplicity_at_point(&cusp).unwrap(), 2);
        assert_eq!(multiplicity_at_point(&smooth).unwrap(), 1);
    }

    #[test]
    fn agrees_with_oracle_off_origin() {
        // umbrella at (0,0,2): cone x^2 - 2y^2, still multiplicity 2
        let f = Field::Prime(7);
        let x = scheme(&["x^2 - y^2*z"], &XYZ, f, &[0, 0, 2]);
        let sym = hilbert_samuel_function(&x, 6).unwrap();
        assert_eq!(sym, oracle::hs_prefix(x.ideal.gens(), &x.point, 6).unwrap());
        let x = scheme(&["x^2 - y^2*z"], &XYZ, f, &[0, 3, 0]);
        assert_eq!(multiplicity_at_point(&x).unwrap(), 1);
    }

    #[test]
    fn zariski_tangent_spaces() {
        assert_eq!(zariski_tangent_space(&scheme(&["x^2 - y^3"], &["x", "y"], Q, &[0, 0])).dim(), 2);
        let s = zariski_tangent_space(&scheme(&["y - x^2"], &["x", "y"], Q, &[0, 0]));
        assert_eq!(s.dim(), 1);
        assert_eq!(s.cutting_forms()[0].fmt_with(&["x".into(), "y".into()]), "y");
        assert_eq!(zariski_tangent_space(&scheme(&["x^2 - y^2*z"], &XYZ, Q, &[0, 0, 0])).dim(), 3);
    }

    #[test]
    fn linear_change_round_trip() {
        let f = Q;
        let e = |v: i64| f.from_i64(v);
        let a = LinearChange { field: f, matrix: vec![vec![e(1), e(1)], vec![e(0), e(1)]] };
        let inv = a.inverse().unwrap();
        let p = parse_poly("x^2 - y^3 + x*y", &["x".into(), "y".into()], f).unwrap();
        assert_eq!(inv.apply(&a.apply(&p)), p);
        let s = SubspaceData::coordinate(f, 3, &[0]);
        assert!(s.contains(&SubspaceData::coordinate(f, 3, &[0, 1])));
        assert_eq!(s.sum(&SubspaceData::coordinate(f, 3, &[1])), SubspaceData::whole(f, 3));
    }
}
