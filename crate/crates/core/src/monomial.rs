use std::fmt;

use smallvec::SmallVec;

/// Dense exponent vector, one entry per ring variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u16; 12]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents(e: &[u32]) -> Self {
        Monomial(e.iter().map(|&x| u16::try_from(x).expect("exponent overflow")).collect())
    }

    pub fn var(nvars: usize, i: usize, power: u32) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = u16::try_from(power).expect("exponent overflow");
        m
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0[i] as u32
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().map(|&e| e as u32)
    }

    pub fn set_exp(&mut self, i: usize, e: u32) {
        self.0[i] = u16::try_from(e).expect("exponent overflow");
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Degree restricted to the variables flagged in `mask`.
    pub fn partial_degree(&self, mask: &[bool]) -> u32 {
        self.0.iter().zip(mask).filter(|(_, &m)| m).map(|(&e, _)| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&o.0)
                .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming divisibility.
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(&a, &b)| b - a).collect())
    }

    pub fn checked_div(&self, d: &Monomial) -> Option<Monomial> {
        if d.divides(self) {
            Some(d.quotient_of(self))
        } else {
            None
        }
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(&a, &b)| a.min(b)).collect())
    }

    pub fn is_coprime(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Index of the only variable present, if the monomial is a pure power.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    /// Adds `k` trailing zero exponents.
    pub fn extend(&self, k: usize) -> Monomial {
        let mut v = self.0.clone();
        v.extend(std::iter::repeat_n(0, k));
        Monomial(v)
    }

    /// Keeps the listed coordinates, in order.
    pub fn select(&self, idx: &[usize]) -> Monomial {
        Monomial(idx.iter().map(|&i| self.0[i]).collect())
    }

    pub fn as_slice(&self) -> &[u16] {
        &self.0
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars()).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.fmt_with(&names))
    }
}

/// All exponent vectors in `nvars` variables of total degree exactly `d`.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Monomial::from_exponents(cur));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

/// All monomials of total degree at most `d`, grouped by increasing degree.
pub fn monomials_up_to(nvars: usize, d: u32) -> Vec<Monomial> {
    (0..=d).flat_map(|k| monomials_of_degree(nvars, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_binomials() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_up_to(2, 3).len(), 10);
        assert_eq!(monomials_of_degree(1, 4), vec![Monomial::var(1, 0, 4)]);
    }

    #[test]
    fn divisibility_and_lcm() {
        let a = Monomial::from_exponents(&[2, 0, 1]);
        let b = Monomial::from_exponents(&[1, 0, 1]);
        assert!(b.divides(&a));
        assert_eq!(b.quotient_of(&a), Monomial::from_exponents(&[1, 0, 0]));
        assert_eq!(a.lcm(&Monomial::from_exponents(&[0, 3, 0])), Monomial::from_exponents(&[2, 3, 1]));
        assert_eq!(Monomial::var(3, 1, 4).pure_power_var(), Some(1));
    }
}
