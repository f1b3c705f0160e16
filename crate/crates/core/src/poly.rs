//! Sparse multivariate polynomials with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Result;
use crate::field::{Field, FieldElem};
use crate::monomial::Monomial;
use crate::order::MonomialOrder;

/// A polynomial in `nvars` variables over `field`. No zero coefficient is ever stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl Poly {
    pub fn zero(field: Field, nvars: usize) -> Self {
        Poly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: Field, nvars: usize, c: FieldElem) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(field: Field, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    pub fn var(field: Field, nvars: usize, i: usize) -> Self {
        Self::monomial(field, Monomial::var(nvars, i, 1), field.one())
    }

    pub fn monomial(field: Field, m: Monomial, c: FieldElem) -> Self {
        let mut p = Self::zero(field, m.nvars());
        p.add_term(m, c);
        p
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs with integer coefficients.
    pub fn from_terms(field: Field, nvars: usize, terms: &[(i64, &[u32])]) -> Self {
        let mut p = Self::zero(field, nvars);
        for (c, e) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(Monomial::from_exponents(e), field.from_i64(*c));
        }
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> FieldElem {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Adds `c * m` in place.
    pub fn add_term(&mut self, m: Monomial, c: FieldElem) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.neg());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn scale(&self, c: &FieldElem) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.field, self.nvars);
        }
        Poly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.mul(c))).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &FieldElem) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.field, self.nvars);
        }
        Poly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.mul(c))).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero(self.field, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.field, self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Minimal total degree of a term (the order at the origin).
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(var)).max()
    }

    /// Minimal total degree in the flagged variables over all terms (order along `V(flagged)`).
    pub fn order_along(&self, mask: &[bool]) -> Option<u32> {
        self.terms.keys().map(|m| m.partial_degree(mask)).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Sum of the terms of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        self.filter_terms(|m| m.degree() == d)
    }

    /// Lowest-degree homogeneous component (the initial form at the origin).
    pub fn lowest_form(&self) -> Poly {
        match self.min_degree() {
            Some(d) => self.homogeneous_part(d),
            None => self.clone(),
        }
    }

    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Poly {
        Poly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        let mut used = vec![false; self.nvars];
        for m in self.terms.keys() {
            for i in m.support() {
                used[i] = true;
            }
        }
        (0..self.nvars).filter(|&i| used[i]).collect()
    }

    pub fn uses_only(&self, mask: &[bool]) -> bool {
        self.support_vars().iter().all(|&i| mask[i])
    }

    pub fn leading_term(&self, ord: &MonomialOrder) -> Option<(&Monomial, &FieldElem)> {
        self.terms.iter().max_by(|a, b| ord.cmp(a.0, b.0))
    }

    pub fn leading_monomial(&self, ord: &MonomialOrder) -> Option<Monomial> {
        self.leading_term(ord).map(|(m, _)| m.clone())
    }

    /// Scales so that the leading coefficient under `ord` is one.
    pub fn monic(&self, ord: &MonomialOrder) -> Poly {
        match self.leading_term(ord) {
            Some((_, c)) => self.scale(&c.inv()),
            None => self.clone(),
        }
    }

    /// Terms sorted decreasingly under `ord`.
    pub fn sorted_terms(&self, ord: &MonomialOrder) -> Vec<(Monomial, FieldElem)> {
        let mut v: Vec<(Monomial, FieldElem)> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        v.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        v
    }

    pub fn evaluate(&self, point: &[FieldElem]) -> FieldElem {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.exponents().enumerate() {
                if e > 0 {
                    t = t.mul(&point[i].pow(e as u64));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Ring homomorphism `x_i -> images[i]`; the images may live in a ring of different arity.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut cache: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(self.field, p.nvars), p.clone()]).collect();
        let mut r = Poly::zero(self.field, target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(self.field, target, c.clone());
            for (i, e) in m.exponents().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap().mul(&images[i]);
                    cache[i].push(next);
                }
                t = t.mul(&cache[i][e as usize]);
            }
            r = r.add(&t);
        }
        r
    }

    /// `f(x + p)`: moves the point `p` to the origin.
    pub fn translate(&self, p: &[FieldElem]) -> Poly {
        if p.iter().all(|c| c.is_zero()) {
            return self.clone();
        }
        let images: Vec<Poly> = (0..self.nvars)
            .map(|i| Poly::var(self.field, self.nvars, i).add(&Poly::constant(self.field, self.nvars, p[i].clone())))
            .collect();
        self.substitute(&images)
    }

    /// Same polynomial in a ring with `k` extra trailing variables.
    pub fn extend_vars(&self, k: usize) -> Poly {
        Poly {
            field: self.field,
            nvars: self.nvars + k,
            terms: self.terms.iter().map(|(m, c)| (m.extend(k), c.clone())).collect(),
        }
    }

    /// Projects onto the listed variables; the others must not occur.
    pub fn select_vars(&self, keep: &[usize]) -> Poly {
        debug_assert!({
            let mut mask = vec![false; self.nvars];
            for &i in keep {
                mask[i] = true;
            }
            self.uses_only(&mask)
        });
        Poly {
            field: self.field,
            nvars: keep.len(),
            terms: self.terms.iter().map(|(m, c)| (m.select(keep), c.clone())).collect(),
        }
    }

    /// Embeds into a ring of arity `nvars` sending variable `i` to `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Poly {
        let mut r = Poly::zero(self.field, nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; nvars];
            for (i, x) in m.exponents().enumerate() {
                e[map[i]] += x;
            }
            r.add_term(Monomial::from_exponents(&e), c.clone());
        }
        r
    }

    /// Reduces coefficients into another field (typically `Q -> GF(p)`).
    pub fn map_field(&self, target: Field) -> Result<Poly> {
        let mut r = Poly::zero(target, self.nvars);
        for (m, c) in &self.terms {
            r.add_term(m.clone(), c.reduce_into(target)?);
        }
        Ok(r)
    }

    /// Hasse derivative `D^alpha`: `D^alpha(x^beta) = C(beta, alpha) x^(beta - alpha)`.
    pub fn hasse_derivative(&self, alpha: &[u32]) -> Poly {
        assert_eq!(alpha.len(), self.nvars);
        let mut r = Poly::zero(self.field, self.nvars);
        'terms: for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut e = Vec::with_capacity(self.nvars);
            for (i, b) in m.exponents().enumerate() {
                if b < alpha[i] {
                    continue 'terms;
                }
                coeff = coeff.mul(&self.field.binomial(b, alpha[i]));
                e.push(b - alpha[i]);
            }
            r.add_term(Monomial::from_exponents(&e), coeff);
        }
        r
    }

    /// Coefficients as a polynomial in `var`: entry `j` multiplies `var^j`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Poly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Poly::zero(self.field, self.nvars); deg + 1];
        for (m, c) in &self.terms {
            let j = m.exp(var) as usize;
            let mut mm = m.clone();
            mm.set_exp(var, 0);
            out[j].add_term(mm, c.clone());
        }
        out
    }

    /// Exact division by a monomial; `None` if some term is not divisible.
    pub fn div_monomial(&self, d: &Monomial) -> Option<Poly> {
        let mut r = Poly::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            r.add_term(m.checked_div(d)?, c.clone());
        }
        Some(r)
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let ord = MonomialOrder::Grevlex;
        let mut s = String::new();
        for (k, (m, c)) in self.sorted_terms(&ord).iter().enumerate() {
            let neg = c.is_negative_display();
            let abs = if neg { c.neg() } else { c.clone() };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&m.fmt_with(names));
            } else {
                s.push_str(&format!("{}*{}", abs, m.fmt_with(names)));
            }
        }
        s
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.fmt_with(&names))
    }
}

/// Default variable names `x0, x1, ...`.
pub fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use proptest::prelude::*;

    fn p(s: &str, vars: &[&str], f: Field) -> Poly {
        let names: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        parse_poly(s, &names, f).unwrap()
    }

    #[test]
    fn hasse_examples() {
        let q = Field::Rational;
        assert_eq!(p("x^2", &["x", "y"], q).hasse_derivative(&[1, 0]), p("2*x", &["x", "y"], q));
        let f2 = Field::Prime(2);
        assert_eq!(p("x^2", &["x"], f2).hasse_derivative(&[2]), Poly::one(f2, 1));
        assert!(p("x^2 + y^2*z", &["x", "y", "z"], f2).hasse_derivative(&[0, 1, 0]).is_zero());
    }

    #[test]
    fn translation_moves_point() {
        let q = Field::Rational;
        let f = p("x^2 - y^2*z", &["x", "y", "z"], q);
        let t = f.translate(&[q.zero(), q.from_i64(3), q.zero()]);
        assert_eq!(t.min_degree(), Some(1));
        let t = f.translate(&[q.zero(), q.zero(), q.from_i64(5)]);
        assert_eq!(t.min_degree(), Some(2));
    }

    #[test]
    fn substitution_and_division() {
        let q = Field::Rational;
        let v = ["x", "y", "z"];
        let f = p("x^2 - y^2*z", &v, q);
        let chart = [p("x*z", &v, q), p("y*z", &v, q), p("z", &v, q)];
        let total = f.substitute(&chart);
        let strict = total.div_monomial(&Monomial::var(3, 2, 2)).unwrap();
        assert_eq!(strict, f);
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec((-3i64..4, prop::collection::vec(0u32..4, 3)), 0..5).prop_map(|ts| {
            let mut r = Poly::zero(Field::Prime(7), 3);
            for (c, e) in ts {
                r.add_term(Monomial::from_exponents(&e), Field::Prime(7).from_i64(c));
            }
            r
        })
    }

    fn multi_index() -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(0u32..3, 3)
    }

    proptest! {
        // D^a D^b = C(a+b, a) D^(a+b), coefficientwise product of binomials.
        #[test]
        fn hasse_composition(f in small_poly(), a in multi_index(), b in multi_index()) {
            let field = Field::Prime(7);
            let lhs = f.hasse_derivative(&b).hasse_derivative(&a);
            let sum: Vec<u32> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let mut c = field.one();
            for i in 0..3 {
                c = c.mul(&field.binomial(sum[i], a[i]));
            }
            prop_assert_eq!(lhs, f.hasse_derivative(&sum).scale(&c));
        }

        #[test]
        fn order_is_additive(f in small_poly(), g in small_poly()) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            prop_assert_eq!(f.mul(&g).min_degree().unwrap(), f.min_degree().unwrap() + g.min_degree().unwrap());
        }
    }
}
