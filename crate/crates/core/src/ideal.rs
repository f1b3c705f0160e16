//! Ideals with cached Gröbner bases, plus the elimination-based toolkit built on them.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{groebner_basis, reduce_by_basis};
use crate::hilbert::{hilbert_series, HilbertSeries};
use crate::monomial::Monomial;
use crate::order::MonomialOrder;
use crate::poly::Poly;

pub struct Ideal {
    field: Field,
    nvars: usize,
    gens: Vec<Poly>,
    cache: Mutex<HashMap<MonomialOrder, Arc<Vec<Poly>>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            field: self.field,
            nvars: self.nvars,
            gens: self.gens.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl std::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Ideal").field("field", &self.field).field("nvars", &self.nvars).field("gens", &self.gens).finish()
    }
}

impl Ideal {
    /// Zero generators are dropped; the generator list may be empty (the zero ideal).
    pub fn new(field: Field, nvars: usize, gens: Vec<Poly>) -> Self {
        for g in &gens {
            assert_eq!(g.nvars(), nvars, "generator arity mismatch");
            assert_eq!(g.field(), field, "generator field mismatch");
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { field, nvars, gens, cache: Mutex::new(HashMap::new()) }
    }

    /// Ideal of a nonempty generator list.
    pub fn from_gens(gens: Vec<Poly>) -> Self {
        let (f, n) = (gens[0].field(), gens[0].nvars());
        Self::new(f, n, gens)
    }

    pub fn unit(field: Field, nvars: usize) -> Self {
        Self::new(field, nvars, vec![Poly::one(field, nvars)])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Reduced Gröbner basis for `ord`, computed once and cached.
    pub fn groebner(&self, ord: &MonomialOrder) -> Result<Arc<Vec<Poly>>> {
        if let Some(gb) = self.cache.lock().unwrap().get(ord) {
            return Ok(gb.clone());
        }
        let gb = Arc::new(groebner_basis(&self.gens, ord)?);
        self.cache.lock().unwrap().insert(ord.clone(), gb.clone());
        Ok(gb)
    }

    pub fn reduced_basis(&self) -> Result<Arc<Vec<Poly>>> {
        self.groebner(&MonomialOrder::Grevlex)
    }

    pub fn normal_form(&self, f: &Poly, ord: &MonomialOrder) -> Result<Poly> {
        let gb = self.groebner(ord)?;
        reduce_by_basis(f, &gb, ord)
    }

    pub fn contains(&self, f: &Poly) -> Result<bool> {
        Ok(self.normal_form(f, &MonomialOrder::Grevlex)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in other.gens() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_as(&self, other: &Ideal) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    pub fn is_unit(&self) -> Result<bool> {
        let gb = self.reduced_basis()?;
        Ok(gb.len() == 1 && gb[0].is_constant())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }

    pub fn leading_monomials(&self, ord: &MonomialOrder) -> Result<Vec<Monomial>> {
        Ok(self.groebner(ord)?.iter().map(|g| g.leading_monomial(ord).unwrap()).collect())
    }

    /// Hilbert series of `k[x]/LT(I)` under grevlex; for homogeneous `I` it is that of `k[x]/I`.
    pub fn hilbert_series(&self) -> Result<HilbertSeries> {
        Ok(hilbert_series(&self.leading_monomials(&MonomialOrder::Grevlex)?, self.nvars))
    }

    /// Krull dimension of `k[x]/I`; `None` for the unit ideal.
    pub fn krull_dim(&self) -> Result<Option<usize>> {
        if self.is_unit()? {
            return Ok(None);
        }
        Ok(Some(self.hilbert_series()?.dim))
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Ideal::new(self.field, self.nvars, g)
    }

    pub fn with(&self, extra: Vec<Poly>) -> Ideal {
        let mut g = self.gens.clone();
        g.extend(extra);
        Ideal::new(self.field, self.nvars, g)
    }

    pub fn extend_vars(&self, k: usize) -> Ideal {
        Ideal::new(self.field, self.nvars + k, self.gens.iter().map(|g| g.extend_vars(k)).collect())
    }

    pub fn map_polys(&self, f: impl Fn(&Poly) -> Poly) -> Ideal {
        let gens: Vec<Poly> = self.gens.iter().map(f).collect();
        let n = gens.first().map(|g| g.nvars()).unwrap_or(self.nvars);
        Ideal::new(self.field, n, gens)
    }

    pub fn map_field(&self, target: Field) -> Result<Ideal> {
        let gens = self.gens.iter().map(|g| g.map_field(target)).collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(target, self.nvars, gens))
    }

    /// `I ∩ k[vars not flagged]`, as an ideal of the same ring.
    pub fn eliminate(&self, eliminate: &[bool]) -> Result<Ideal> {
        let ord = MonomialOrder::elimination(eliminate);
        let gb = self.groebner(&ord)?;
        let keep: Vec<bool> = eliminate.iter().map(|e| !e).collect();
        let gens: Vec<Poly> = gb.iter().filter(|g| g.uses_only(&keep)).cloned().collect();
        Ok(Ideal::new(self.field, self.nvars, gens))
    }

    /// `I ∩ k[keep]`.
    pub fn elimination_ideal(&self, keep: &[usize]) -> Result<Ideal> {
        let mut elim = vec![true; self.nvars];
        for &k in keep {
            elim[k] = false;
        }
        self.eliminate(&elim)
    }

    /// `I : f^∞` through `<I, 1 - w f> ∩ k[x]`.
    pub fn saturation(&self, f: &Poly) -> Result<Ideal> {
        if f.is_zero() {
            return Err(Error::Contract("saturation by the zero polynomial".into()));
        }
        let n = self.nvars;
        let big = self.extend_vars(1);
        let w = Poly::var(self.field, n + 1, n);
        let rab = Poly::one(self.field, n + 1).sub(&w.mul(&f.extend_vars(1)));
        let mut mask = vec![false; n + 1];
        mask[n] = true;
        let elim = big.with(vec![rab]).eliminate(&mask)?;
        let keep: Vec<usize> = (0..n).collect();
        Ok(Ideal::new(self.field, n, elim.gens().iter().map(|g| g.select_vars(&keep)).collect()))
    }

    /// Smallest `N <= cap` with `f^N * sat ⊆ I`.
    pub fn saturation_exponent(&self, f: &Poly, sat: &Ideal, cap: u32) -> Result<Option<u32>> {
        let mut fp = Poly::one(self.field, self.nvars);
        for n in 0..=cap {
            if sat.gens().iter().map(|g| self.contains(&g.mul(&fp))).collect::<Result<Vec<bool>>>()?.iter().all(|&b| b) {
                return Ok(Some(n));
            }
            fp = fp.mul(f);
        }
        Ok(None)
    }

    /// `f ∈ √I` iff `1 ∈ <I, 1 - w f>`.
    pub fn radical_contains(&self, f: &Poly) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        let n = self.nvars;
        let w = Poly::var(self.field, n + 1, n);
        let rab = Poly::one(self.field, n + 1).sub(&w.mul(&f.extend_vars(1)));
        self.extend_vars(1).with(vec![rab]).is_unit()
    }

    /// `√I ⊇ other`, generator by generator.
    pub fn radical_contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in other.gens() {
            if !self.radical_contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `I ∩ J` via `<t I, (1 - t) J> ∩ k[x]`.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        let n = self.nvars;
        let t = Poly::var(self.field, n + 1, n);
        let one_t = Poly::one(self.field, n + 1).sub(&t);
        let mut gens: Vec<Poly> = self.gens.iter().map(|g| g.extend_vars(1).mul(&t)).collect();
        gens.extend(other.gens.iter().map(|g| g.extend_vars(1).mul(&one_t)));
        let mut mask = vec![false; n + 1];
        mask[n] = true;
        let e = Ideal::new(self.field, n + 1, gens).eliminate(&mask)?;
        let keep: Vec<usize> = (0..n).collect();
        Ok(Ideal::new(self.field, n, e.gens().iter().map(|g| g.select_vars(&keep)).collect()))
    }

    /// `I : f`.
    pub fn quotient(&self, f: &Poly) -> Result<Ideal> {
        if f.is_zero() {
            return Ok(Ideal::unit(self.field, self.nvars));
        }
        let inter = self.intersect(&Ideal::new(self.field, self.nvars, vec![f.clone()]))?;
        let gens = inter
            .gens()
            .iter()
            .map(|g| exact_division(g, f))
            .collect::<Result<Vec<Poly>>>()?;
        Ok(Ideal::new(self.field, self.nvars, gens))
    }

    /// Membership in the localization at the origin: `f ∈ I O_0` iff `I : f ⊄ m_0`.
    pub fn contains_locally(&self, f: &Poly) -> Result<bool> {
        if self.contains(f)? {
            return Ok(true);
        }
        let q = self.quotient(f)?;
        Ok(q.gens().iter().any(|g| !g.constant_term().is_zero()))
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self.gens.iter().map(|g| g.fmt_with(names)).collect();
        format!("<{}>", parts.join(", "))
    }

    /// Canonical printing: the reduced grevlex basis.
    pub fn canonical_string(&self, names: &[String]) -> Result<String> {
        let gb = self.reduced_basis()?;
        let parts: Vec<String> = gb.iter().map(|g| g.fmt_with(names)).collect();
        Ok(format!("<{}>", parts.join(", ")))
    }
}

/// Exact quotient `g / f`; errors when `f` does not divide `g`.
pub fn exact_division(g: &Poly, f: &Poly) -> Result<Poly> {
    let ord = MonomialOrder::Grevlex;
    let (flm, flc) = f.leading_term(&ord).map(|(m, c)| (m.clone(), c.clone())).ok_or(Error::Contract("division by zero".into()))?;
    let mut rem = g.clone();
    let mut q = Poly::zero(g.field(), g.nvars());
    while let Some((m, c)) = rem.leading_term(&ord).map(|(m, c)| (m.clone(), c.clone())) {
        let Some(mq) = m.checked_div(&flm) else {
            return Err(Error::Internal("inexact polynomial division".into()));
        };
        let cq = c.div(&flc);
        q.add_term(mq.clone(), cq.clone());
        rem = rem.sub(&f.mul_term(&mq, &cq));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn ideal(src: &[&str], vars: &[&str], f: Field) -> Ideal {
        let names: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        Ideal::new(f, vars.len(), src.iter().map(|s| parse_poly(s, &names, f).unwrap()).collect())
    }

    fn poly(s: &str, vars: &[&str]) -> Poly {
        let names: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        parse_poly(s, &names, Field::Rational).unwrap()
    }

    const Q: Field = Field::Rational;

    #[test]
    fn elimination_examples() {
        let v = ["V", "y"];
        assert!(ideal(&["V^2 - y"], &v, Q).elimination_ideal(&[1]).unwrap().is_zero());
        let v = ["V", "y", "w"];
        let e = ideal(&["V - y^2", "V^2 - w"], &v, Q).elimination_ideal(&[1, 2]).unwrap();
        assert!(e.same_as(&ideal(&["y^4 - w"], &v, Q)).unwrap());
        let v = ["t", "x", "y", "Z"];
        let e = ideal(&["Z - t^3", "x - t^3", "y - t^4"], &v, Q).elimination_ideal(&[1, 2, 3]).unwrap();
        assert!(e.contains(&poly("Z - x", &v)).unwrap());
    }

    #[test]
    fn saturation_examples() {
        let v = ["x", "y"];
        let i = ideal(&["x*y"], &v, Q);
        assert!(i.saturation(&poly("x", &v)).unwrap().same_as(&ideal(&["y"], &v, Q)).unwrap());
        assert!(ideal(&["x^2"], &v, Q).saturation(&poly("x", &v)).unwrap().is_unit().unwrap());
        let v = ["x", "y", "z"];
        let i = ideal(&["y^2*(x^2 - y)"], &v, Q);
        let sat = i.saturation(&poly("y", &v)).unwrap();
        assert!(sat.same_as(&ideal(&["x^2 - y"], &v, Q)).unwrap());
        assert_eq!(i.saturation_exponent(&poly("y", &v), &sat, 5).unwrap(), Some(2));
    }

    #[test]
    fn radical_examples() {
        let v = ["x", "y"];
        assert!(ideal(&["x^2"], &v, Q).radical_contains(&poly("x", &v)).unwrap());
        assert!(!ideal(&["x^2"], &v, Q).radical_contains(&poly("y", &v)).unwrap());
        let i = ideal(&["x^2 - y^2", "(x - y)^2"], &v, Q);
        assert!(i.radical_contains(&poly("x - y", &v)).unwrap());
        assert!(!i.contains(&poly("x - y", &v)).unwrap());
        assert!(!i.radical_contains(&poly("x + y", &v)).unwrap());
    }

    #[test]
    fn quotient_and_local_membership() {
        let v = ["x", "y"];
        // x(x - 1) generates x locally at the origin
        let i = ideal(&["x^2 - x"], &v, Q);
        assert!(!i.contains(&poly("x", &v)).unwrap());
        assert!(i.contains_locally(&poly("x", &v)).unwrap());
        assert!(!i.contains_locally(&poly("y", &v)).unwrap());
        let q = ideal(&["x*y", "y^2"], &v, Q).quotient(&poly("y", &v)).unwrap();
        assert!(q.same_as(&ideal(&["x", "y"], &v, Q)).unwrap());
    }
}
