//! Buchberger's algorithm with normal selection and the coprime and chain criteria.

use std::cell::Cell;
use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::monomial::Monomial;
use crate::order::MonomialOrder;
use crate::poly::Poly;

pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

thread_local! {
    static STEP_BUDGET: Cell<u64> = const { Cell::new(DEFAULT_STEP_BUDGET) };
}

/// Reduction-step cap applied to each Gröbner computation on this thread.
pub fn step_budget() -> u64 {
    STEP_BUDGET.with(|b| b.get())
}

pub fn set_step_budget(n: u64) {
    STEP_BUDGET.with(|b| b.set(n));
}

/// Runs `f` with a temporary step budget.
pub fn with_step_budget<T>(n: u64, f: impl FnOnce() -> T) -> T {
    let old = step_budget();
    set_step_budget(n);
    let r = f();
    set_step_budget(old);
    r
}

/// Terms kept sorted decreasingly under the working order.
#[derive(Clone, Debug)]
struct SortedPoly {
    terms: Vec<(Monomial, FieldElem)>,
}

impl SortedPoly {
    fn from_poly(p: &Poly, ord: &MonomialOrder) -> Self {
        SortedPoly { terms: p.sorted_terms(ord) }
    }

    fn to_poly(&self, proto: &Poly) -> Poly {
        let mut r = Poly::zero(proto.field(), proto.nvars());
        for (m, c) in &self.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn make_monic(&mut self) {
        if let Some((_, c)) = self.terms.first() {
            if !c.is_one() {
                let inv = c.inv();
                for t in &mut self.terms {
                    t.1 = t.1.mul(&inv);
                }
            }
        }
    }

    /// `self - c * m * g`, merging two sorted term lists.
    fn sub_mul(&self, c: &FieldElem, m: &Monomial, g: &SortedPoly, ord: &MonomialOrder) -> SortedPoly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut i = 0;
        let mut gi = g.terms.iter().map(|(gm, gc)| (gm.mul(m), gc.mul(c))).peekable();
        while i < self.terms.len() || gi.peek().is_some() {
            match (self.terms.get(i), gi.peek()) {
                (Some(a), Some(b)) => match ord.cmp(&a.0, &b.0) {
                    Ordering::Greater => {
                        out.push(a.clone());
                        i += 1;
                    }
                    Ordering::Less => {
                        let (bm, bc) = gi.next().unwrap();
                        out.push((bm, bc.neg()));
                    }
                    Ordering::Equal => {
                        let (_, bc) = gi.next().unwrap();
                        let s = a.1.sub(&bc);
                        if !s.is_zero() {
                            out.push((a.0.clone(), s));
                        }
                        i += 1;
                    }
                },
                (Some(a), None) => {
                    out.push(a.clone());
                    i += 1;
                }
                (None, Some(_)) => {
                    let (bm, bc) = gi.next().unwrap();
                    out.push((bm, bc.neg()));
                }
                (None, None) => break,
            }
        }
        SortedPoly { terms: out }
    }
}

struct Steps {
    used: u64,
    limit: u64,
}

impl Steps {
    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::Budget { budget: "groebner reduction steps", limit: self.limit });
        }
        Ok(())
    }
}

/// Full reduction of `f` by `basis` (all monic).
fn reduce(f: &SortedPoly, basis: &[&SortedPoly], ord: &MonomialOrder, steps: &mut Steps) -> Result<SortedPoly> {
    let mut p = f.clone();
    let mut rem: Vec<(Monomial, FieldElem)> = Vec::new();
    while !p.is_zero() {
        let (lm, lc) = p.terms[0].clone();
        match basis.iter().find(|g| g.lm().divides(&lm)) {
            Some(g) => {
                steps.tick()?;
                let q = g.lm().quotient_of(&lm);
                p = p.sub_mul(&lc, &q, g, ord);
            }
            None => {
                rem.push((lm, lc));
                p.terms.remove(0);
            }
        }
    }
    Ok(SortedPoly { terms: rem })
}

fn spoly(f: &SortedPoly, g: &SortedPoly, ord: &MonomialOrder) -> SortedPoly {
    let l = f.lm().lcm(g.lm());
    let mf = f.lm().quotient_of(&l);
    let mg = g.lm().quotient_of(&l);
    let one = f.terms[0].1.field().one();
    let zero = SortedPoly { terms: Vec::new() };
    let a = zero.sub_mul(&one.neg(), &mf, f, ord);
    a.sub_mul(&one, &mg, g, ord)
}

/// Reduced Gröbner basis of the ideal generated by `gens`, sorted by decreasing leading monomial.
pub fn groebner_basis(gens: &[Poly], ord: &MonomialOrder) -> Result<Vec<Poly>> {
    let proto = match gens.first() {
        Some(p) => p.clone(),
        None => return Ok(Vec::new()),
    };
    let mut steps = Steps { used: 0, limit: step_budget() };
    let mut basis: Vec<SortedPoly> = Vec::new();
    let mut pairs: Vec<(usize, usize, Monomial)> = Vec::new();

    let mut inputs: Vec<SortedPoly> = gens.iter().filter(|g| !g.is_zero()).map(|g| SortedPoly::from_poly(g, ord)).collect();
    inputs.sort_by(|a, b| ord.cmp(a.lm(), b.lm()));

    let add = |h: SortedPoly, basis: &mut Vec<SortedPoly>, pairs: &mut Vec<(usize, usize, Monomial)>| {
        let k = basis.len();
        for (i, g) in basis.iter().enumerate() {
            pairs.push((i, k, g.lm().lcm(h.lm())));
        }
        basis.push(h);
    };

    for f in inputs {
        let refs: Vec<&SortedPoly> = basis.iter().collect();
        let mut h = reduce(&f, &refs, ord, &mut steps)?;
        if !h.is_zero() {
            h.make_monic();
            if h.lm().is_one() {
                return Ok(vec![Poly::one(proto.field(), proto.nvars())]);
            }
            add(h, &mut basis, &mut pairs);
        }
    }

    while !pairs.is_empty() {
        // normal selection: smallest lcm first
        let (idx, _) = pairs
            .iter()
            .enumerate()
            .min_by(|a, b| ord.cmp(&a.1 .2, &b.1 .2).then_with(|| (a.1 .0, a.1 .1).cmp(&(b.1 .0, b.1 .1))))
            .unwrap();
        let (i, j, lcm) = pairs.swap_remove(idx);
        if basis[i].lm().is_coprime(basis[j].lm()) {
            continue;
        }
        let pending = |a: usize, b: usize, pairs: &[(usize, usize, Monomial)]| {
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            pairs.iter().any(|p| p.0 == a && p.1 == b)
        };
        let chain = (0..basis.len()).any(|k| {
            k != i && k != j && basis[k].lm().divides(&lcm) && !pending(i, k, &pairs) && !pending(j, k, &pairs)
        });
        if chain {
            continue;
        }
        let s = spoly(&basis[i], &basis[j], ord);
        let refs: Vec<&SortedPoly> = basis.iter().collect();
        let mut h = reduce(&s, &refs, ord, &mut steps)?;
        if !h.is_zero() {
            h.make_monic();
            if h.lm().is_one() {
                return Ok(vec![Poly::one(proto.field(), proto.nvars())]);
            }
            add(h, &mut basis, &mut pairs);
        }
    }

    // minimalize then interreduce
    let mut keep: Vec<SortedPoly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && h.lm().divides(g.lm()) && (h.lm() != g.lm() || j < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<&SortedPoly> = keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g).collect();
        let head = SortedPoly { terms: vec![keep[i].terms[0].clone()] };
        let tail = SortedPoly { terms: keep[i].terms[1..].to_vec() };
        let t = reduce(&tail, &others, ord, &mut steps)?;
        let mut terms = head.terms;
        terms.extend(t.terms);
        reduced.push(SortedPoly { terms });
    }
    reduced.sort_by(|a, b| ord.cmp(b.lm(), a.lm()));
    Ok(reduced.iter().map(|g| g.to_poly(&proto)).collect())
}

/// Remainder of `f` on division by a Gröbner basis `gb` (must be a basis for `ord`).
pub fn reduce_by_basis(f: &Poly, gb: &[Poly], ord: &MonomialOrder) -> Result<Poly> {
    if f.is_zero() || gb.is_empty() {
        return Ok(f.clone());
    }
    let mut steps = Steps { used: 0, limit: step_budget() };
    let basis: Vec<SortedPoly> = gb
        .iter()
        .map(|g| {
            let mut s = SortedPoly::from_poly(g, ord);
            s.make_monic();
            s
        })
        .collect();
    let refs: Vec<&SortedPoly> = basis.iter().collect();
    let r = reduce(&SortedPoly::from_poly(f, ord), &refs, ord, &mut steps)?;
    Ok(r.to_poly(f))
}

/// Checks that every S-polynomial of `gb` reduces to zero.
pub fn is_groebner_basis(gb: &[Poly], ord: &MonomialOrder) -> Result<bool> {
    let mut steps = Steps { used: 0, limit: step_budget() };
    let basis: Vec<SortedPoly> = gb
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let mut s = SortedPoly::from_poly(g, ord);
            s.make_monic();
            s
        })
        .collect();
    let refs: Vec<&SortedPoly> = basis.iter().collect();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let s = spoly(&basis[i], &basis[j], ord);
            if !reduce(&s, &refs, ord, &mut steps)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::parse::parse_poly;

    fn polys(src: &[&str], vars: &[&str], f: Field) -> Vec<Poly> {
        let names: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        src.iter().map(|s| parse_poly(s, &names, f).unwrap()).collect()
    }

    #[test]
    fn principal_ideals_are_their_own_basis() {
        let g = polys(&["x"], &["x", "y"], Field::Rational);
        assert_eq!(groebner_basis(&g, &MonomialOrder::Lex).unwrap(), g);
        let g = polys(&["x^2 - y^3"], &["x", "y"], Field::Rational);
        let gb = groebner_basis(&g, &MonomialOrder::Grevlex).unwrap();
        assert_eq!(gb.len(), 1);
        assert_eq!(gb[0], g[0].monic(&MonomialOrder::Grevlex));
    }

    #[test]
    fn twisted_cubic_style_basis_is_valid_and_stable() {
        let g = polys(&["y^2 - x*z", "x^3 - y*z", "z^2 - x^2*y"], &["x", "y", "z"], Field::Rational);
        let ord = MonomialOrder::Grevlex;
        let gb = groebner_basis(&g, &ord).unwrap();
        assert!(is_groebner_basis(&gb, &ord).unwrap());
        for f in &g {
            assert!(reduce_by_basis(f, &gb, &ord).unwrap().is_zero());
        }
        assert_eq!(groebner_basis(&gb, &ord).unwrap(), gb);
    }

    #[test]
    fn budget_is_enforced() {
        let g = polys(&["y^2 - x*z", "x^3 - y*z", "z^2 - x^2*y"], &["x", "y", "z"], Field::Rational);
        let r = with_step_budget(2, || groebner_basis(&g, &MonomialOrder::Lex));
        assert!(matches!(r, Err(Error::Budget { .. })));
    }

    #[test]
    fn division_example() {
        let v = ["x", "y", "z"];
        let gb = polys(&["x^2 - y^3"], &v, Field::Rational);
        let f = polys(&["x^2*z"], &v, Field::Rational);
        let r = reduce_by_basis(&f[0], &gb, &MonomialOrder::Lex).unwrap();
        assert_eq!(r, polys(&["y^3*z"], &v, Field::Rational)[0]);
        let f = polys(&["y^3"], &v, Field::Rational);
        assert_eq!(reduce_by_basis(&f[0], &gb, &MonomialOrder::Lex).unwrap(), f[0]);
    }
}
