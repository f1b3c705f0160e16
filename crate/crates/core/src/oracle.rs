//! Brute-force oracle: rational points over `GF(q)` and Hilbert–Samuel lengths by
//! truncated linear algebra. Nothing here touches Gröbner bases.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::linalg::Echelon;
use crate::monomial::{monomials_up_to, Monomial};
use crate::poly::Poly;

/// Largest box `q^n` the enumerator will scan.
pub const POINT_LIMIT: u64 = 10_000_000;
/// Default ceiling on the truncation degree of the multiplicity fit.
pub const DEFAULT_NMAX: u32 = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointTable {
    pub q: u32,
    pub nvars: usize,
    pub points: Vec<Vec<u32>>,
    /// Parallel to `points`; `None` until stratified.
    pub mults: Vec<Option<u32>>,
}

impl PointTable {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_mult(&self) -> Option<u32> {
        self.mults.iter().flatten().copied().max()
    }

    /// Points whose multiplicity equals `e`.
    pub fn with_mult(&self, e: u32) -> Vec<Vec<u32>> {
        self.points.iter().zip(&self.mults).filter(|(_, m)| **m == Some(e)).map(|(p, _)| p.clone()).collect()
    }

    pub fn mult_of(&self, point: &[u32]) -> Option<u32> {
        self.points.iter().position(|p| p == point).and_then(|i| self.mults[i])
    }
}

/// Residue-level polynomial for fast evaluation.
struct ModPoly {
    terms: Vec<(u64, Vec<(usize, u32)>)>,
}

impl ModPoly {
    fn new(f: &Poly) -> Self {
        let terms = f
            .terms()
            .map(|(m, c)| (c.residue().unwrap() as u64, m.support().map(|i| (i, m.exp(i))).collect()))
            .collect();
        ModPoly { terms }
    }

    fn eval(&self, pows: &[Vec<Vec<u64>>], pt: &[u32], p: u64) -> u64 {
        let mut acc = 0u64;
        for (c, vars) in &self.terms {
            let mut t = *c;
            for &(i, e) in vars {
                t = t * pows[i][pt[i] as usize][e as usize] % p;
            }
            acc = (acc + t) % p;
        }
        acc
    }
}

fn prime_field(q: u32) -> Result<Field> {
    Field::prime(q).map_err(|_| Error::InvalidInput(format!("oracle modulus {q} must be prime")))
}

/// All `GF(q)`-rational zeros of `gens`; the generators are reduced mod `q` first.
pub fn enumerate_points(gens: &[Poly], nvars: usize, q: u32) -> Result<PointTable> {
    let field = prime_field(q)?;
    let total = (q as u64).checked_pow(nvars as u32).unwrap_or(u64::MAX);
    if total > POINT_LIMIT {
        return Err(Error::Budget { budget: "point enumeration", limit: POINT_LIMIT });
    }
    let mods: Vec<ModPoly> = gens.iter().map(|g| g.map_field(field).map(|g| ModPoly::new(&g))).collect::<Result<_>>()?;
    let maxdeg: Vec<u32> = (0..nvars).map(|i| gens.iter().filter_map(|g| g.degree_in(i)).max().unwrap_or(0)).collect();
    let p = q as u64;
    let pows: Vec<Vec<Vec<u64>>> = (0..nvars)
        .map(|i| {
            (0..p)
                .map(|v| {
                    let mut row = vec![1u64; maxdeg[i] as usize + 1];
                    for e in 1..row.len() {
                        row[e] = row[e - 1] * v % p;
                    }
                    row
                })
                .collect()
        })
        .collect();
    let mut points = Vec::new();
    let mut pt = vec![0u32; nvars];
    for _ in 0..total {
        if mods.iter().all(|m| m.eval(&pows, &pt, p) == 0) {
            points.push(pt.clone());
        }
        // odometer, last coordinate fastest
        for i in (0..nvars).rev() {
            pt[i] += 1;
            if pt[i] < q {
                break;
            }
            pt[i] = 0;
        }
    }
    let mults = vec![None; points.len()];
    Ok(PointTable { q, nvars, points, mults })
}

pub fn point_elems(field: Field, pt: &[u32]) -> Vec<FieldElem> {
    pt.iter().map(|&v| field.from_i64(v as i64)).collect()
}

/// `l(0..=n)` at `point`, by row-reducing `{trunc_n(x^a g)}` with lowest-degree pivots.
pub fn hs_prefix(gens: &[Poly], point: &[FieldElem], n: u32) -> Result<Vec<u64>> {
    let Some(first) = gens.first() else {
        return Err(Error::InvalidInput("hs oracle needs at least one generator".into()));
    };
    let (field, nvars) = (first.field(), first.nvars());
    let shifted: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.translate(point)).collect();
    if shifted.iter().any(|g| !g.constant_term().is_zero()) {
        return Err(Error::Contract("oracle point does not lie on the scheme".into()));
    }
    let cols = monomials_up_to(nvars, n);
    let index: HashMap<Monomial, usize> = cols.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut ech = Echelon::new(field);
    let mut pivots_by_degree = vec![0u64; n as usize + 1];
    for g in &shifted {
        let ord = g.min_degree().unwrap();
        if ord > n {
            continue;
        }
        for a in monomials_up_to(nvars, n - ord) {
            let row: BTreeMap<usize, FieldElem> = g
                .terms()
                .filter(|(m, _)| m.degree() + a.degree() <= n)
                .map(|(m, c)| (index[&m.mul(&a)], c.clone()))
                .collect();
            if let Some(lead) = ech.insert_lead(row) {
                pivots_by_degree[cols[lead].degree() as usize] += 1;
            }
        }
    }
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = 0u64;
    for d in 0..=n {
        let count = crate::hilbert::count_standard_monomials(&[], nvars, d) as u64;
        acc += count - pivots_by_degree[d as usize];
        out.push(acc);
    }
    Ok(out)
}

/// `l(n) = dim_k k[x]/(I + m^{n+1})` at `point`.
pub fn hs_oracle(gens: &[Poly], point: &[FieldElem], n: u32) -> Result<u64> {
    Ok(*hs_prefix(gens, point, n)?.last().unwrap())
}

/// Degree and leading value of the Hilbert polynomial fitting the tail of `l`, if one
/// fits the last two difference windows.
pub fn fit_tail(l: &[u64], max_dim: usize) -> Option<(usize, u64)> {
    let vals: Vec<i64> = l.iter().map(|&v| v as i64).collect();
    for d in 0..=max_dim {
        // need Δ^{d+1} at two consecutive positions: d + 3 values
        if vals.len() < d + 3 {
            return None;
        }
        let mut diffs = vals.clone();
        for _ in 0..=d {
            diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
        }
        let k = diffs.len();
        if diffs[k - 1] == 0 && diffs[k - 2] == 0 {
            let mut dd = vals.clone();
            for _ in 0..d {
                dd = dd.windows(2).map(|w| w[1] - w[0]).collect();
            }
            let e = *dd.last().unwrap();
            if e > 0 {
                return Some((d, e as u64));
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultFit {
    pub multiplicity: u64,
    pub dim: usize,
    /// Truncation degree at which two consecutive fits agreed.
    pub n_used: u32,
    pub lengths: Vec<u64>,
}

/// Multiplicity `e = d! * lc` of the Hilbert–Samuel polynomial, accepted once the fits at
/// `n - 1` and `n` agree.
pub fn mult_oracle_fit(gens: &[Poly], point: &[FieldElem], n_max: u32) -> Result<MultFit> {
    let nvars = gens.first().map(|g| g.nvars()).unwrap_or(0);
    let mut n = 6.min(n_max);
    loop {
        let l = hs_prefix(gens, point, n)?;
        let mut prev = None;
        for k in 2..=n as usize {
            let fit = fit_tail(&l[..=k], nvars);
            if let Some((dim, e)) = fit.filter(|_| fit == prev) {
                return Ok(MultFit { multiplicity: e, dim, n_used: k as u32, lengths: l });
            }
            prev = fit;
        }
        if n >= n_max {
            return Err(Error::Inconclusive(format!("Hilbert-Samuel fit did not stabilise for n <= {n_max}")));
        }
        n = (n + 2).min(n_max);
    }
}

pub fn mult_oracle(gens: &[Poly], point: &[FieldElem], n_max: u32) -> Result<u64> {
    Ok(mult_oracle_fit(gens, point, n_max)?.multiplicity)
}

/// Enumerates `GF(q)`-points and attaches the oracle multiplicity to each.
pub fn stratify_points(gens: &[Poly], nvars: usize, q: u32, n_max: u32) -> Result<PointTable> {
    let field = prime_field(q)?;
    let mut table = enumerate_points(gens, nvars, q)?;
    let local: Vec<Poly> = gens.iter().map(|g| g.map_field(field)).collect::<Result<_>>()?;
    let local = if local.is_empty() { vec![Poly::zero(field, nvars)] } else { local };
    let mut mults = Vec::with_capacity(table.len());
    for pt in &table.points {
        mults.push(Some(mult_oracle(&local, &point_elems(field, pt), n_max)? as u32));
    }
    table.mults = mults;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn gens(src: &[&str], vars: &[&str], f: Field) -> Vec<Poly> {
        let names: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        src.iter().map(|s| parse_poly(s, &names, f).unwrap()).collect()
    }

    #[test]
    fn enumeration_examples() {
        let f = Field::Prime(3);
        assert_eq!(enumerate_points(&gens(&["x"], &["x", "y"], f), 2, 3).unwrap().len(), 3);
        assert!(enumerate_points(&gens(&["1"], &["x", "y"], f), 2, 3).unwrap().is_empty());
        // x^2 = y^3 over GF(5): cubing is a bijection, so one y per x
        let t = enumerate_points(&gens(&["x^2 - y^3"], &["x", "y"], Field::Prime(5)), 2, 5).unwrap();
        assert_eq!(t.len(), 5);
        assert!(enumerate_points(&gens(&["x"], &["a", "b", "c", "d", "e", "x"], Field::Prime(17)), 6, 17).is_err());
    }

    #[test]
    fn hilbert_samuel_lengths() {
        let q = Field::Rational;
        let o = |f: Field, n| vec![f.zero(); n];
        assert_eq!(hs_prefix(&gens(&["y - x^2"], &["x", "y"], q), &o(q, 2), 2).unwrap(), vec![1, 2, 3]);
        assert_eq!(hs_oracle(&gens(&["x^2 - y^3"], &["x", "y"], q), &o(q, 2), 3).unwrap(), 7);
        let curve = gens(&["y^2 - x*z", "x^3 - y*z", "z^2 - x^2*y"], &["x", "y", "z"], q);
        assert_eq!(hs_prefix(&curve, &o(q, 3), 3).unwrap(), vec![1, 4, 7, 10]);
        assert_eq!(hs_prefix(&gens(&["x^2 - y^2*z"], &["x", "y", "z"], q), &o(q, 3), 2).unwrap(), vec![1, 4, 9]);
    }

    #[test]
    fn multiplicities() {
        let q = Field::Rational;
        let o = |n| vec![q.zero(); n];
        assert_eq!(mult_oracle(&gens(&["y - x^2"], &["x", "y"], q), &o(2), 10).unwrap(), 1);
        assert_eq!(mult_oracle(&gens(&["x^2 - y^3"], &["x", "y"], q), &o(2), 10).unwrap(), 2);
        let curve = gens(&["y^2 - x*z", "x^3 - y*z", "z^2 - x^2*y"], &["x", "y", "z"], q);
        assert_eq!(mult_oracle(&curve, &o(3), 10).unwrap(), 3);
        // pre-asymptotic window: a quintic surface point
        let f = Field::Prime(7);
        assert_eq!(mult_oracle(&gens(&["x^5 + y^6 + z^7"], &["x", "y", "z"], f), &vec![f.zero(); 3], 10).unwrap(), 5);
    }

    #[test]
    fn stratification_tables() {
        let f = Field::Prime(5);
        let t = stratify_points(&gens(&["x^2 - y^3"], &["x", "y"], f), 2, 5, 10).unwrap();
        for (p, m) in t.points.iter().zip(&t.mults) {
            assert_eq!(*m, Some(if p == &vec![0, 0] { 2 } else { 1 }));
        }
        let t = stratify_points(&gens(&["x^2 - y^2*z"], &["x", "y", "z"], f), 3, 5, 10).unwrap();
        for (p, m) in t.points.iter().zip(&t.mults) {
            assert_eq!(*m, Some(if p[0] == 0 && p[1] == 0 { 2 } else { 1 }), "{p:?}");
        }
    }
}
