//! Hilbert series of monomial ideals by pivot-variable recursion.

use serde::{Deserialize, Serialize};

use crate::monomial::{monomials_of_degree, Monomial};

/// Hilbert series `N(t) / (1 - t)^dim` of a standard graded quotient `k[x]/M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSeries {
    pub numerator: Vec<i64>,
    pub dim: usize,
}

impl HilbertSeries {
    /// `N(1)`: the degree (multiplicity) of the graded quotient.
    pub fn degree(&self) -> i64 {
        self.numerator.iter().sum()
    }

    /// Value of the Hilbert function in degree `k`.
    pub fn value(&self, k: u32) -> i64 {
        series_coefficient(&self.numerator, self.dim, k)
    }

    /// Cumulative lengths `sum_{j <= n} H(j)` for `n = 0..=n_max`.
    pub fn cumulative(&self, n_max: u32) -> Vec<i64> {
        (0..=n_max).map(|n| series_coefficient(&self.numerator, self.dim + 1, n)).collect()
    }
}

/// Coefficient of `t^k` in `N(t) / (1 - t)^d`.
fn series_coefficient(num: &[i64], d: usize, k: u32) -> i64 {
    let k = k as i64;
    let mut acc: i64 = 0;
    for (i, &c) in num.iter().enumerate() {
        let j = k - i as i64;
        if j < 0 {
            break;
        }
        let mult = if d == 0 {
            if j == 0 {
                1
            } else {
                0
            }
        } else {
            binom_i64(j + d as i64 - 1, d as i64 - 1)
        };
        acc += c * mult;
    }
    acc
}

fn binom_i64(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    out
}

fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

fn minimalize(gens: &[Monomial]) -> Vec<Monomial> {
    let mut g: Vec<Monomial> = gens.to_vec();
    g.sort_by_key(|m| m.degree());
    g.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for m in g {
        if !out.iter().any(|o| o.divides(&m)) {
            out.push(m);
        }
    }
    out
}

/// Numerator `K(t)` with `HS(k[x]/M) = K(t) / (1 - t)^nvars`.
fn kernel_numerator(gens: &[Monomial]) -> Vec<i64> {
    let gens = minimalize(gens);
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|m| m.is_one()) {
        return vec![0];
    }
    if gens.iter().all(|m| m.pure_power_var().is_some()) {
        let mut acc = vec![1i64];
        for m in &gens {
            let d = m.degree() as usize;
            let mut f = vec![0i64; d + 1];
            f[0] = 1;
            f[d] = -1;
            acc = poly_mul(&acc, &f);
        }
        return acc;
    }
    // pivot on the variable occurring in the most non-pure generators
    let n = gens[0].nvars();
    let mut counts = vec![0usize; n];
    for m in gens.iter().filter(|m| m.pure_power_var().is_none()) {
        for i in m.support() {
            counts[i] += 1;
        }
    }
    let v = (0..n).max_by_key(|&i| (counts[i], std::cmp::Reverse(i))).unwrap();
    let pivot = Monomial::var(n, v, 1);
    let mut plus = gens.clone();
    plus.push(pivot.clone());
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|m| {
            let mut q = m.clone();
            if q.exp(v) > 0 {
                q.set_exp(v, q.exp(v) - 1);
            }
            q
        })
        .collect();
    let a = kernel_numerator(&plus);
    let b = kernel_numerator(&colon);
    let mut shifted = vec![0i64];
    shifted.extend(b);
    trim(poly_add(&a, &shifted))
}

/// Hilbert series of `k[x]/M` for the monomial ideal generated by `gens` in `nvars` variables.
pub fn hilbert_series(gens: &[Monomial], nvars: usize) -> HilbertSeries {
    let mut k = trim(kernel_numerator(gens));
    let mut dim = nvars;
    if k.iter().all(|&c| c == 0) {
        return HilbertSeries { numerator: vec![0], dim: 0 };
    }
    // divide by (1 - t) while K(1) = 0
    while dim > 0 && k.iter().sum::<i64>() == 0 {
        let mut q = vec![0i64; k.len() - 1];
        let mut carry = 0i64;
        for i in 0..q.len() {
            carry += k[i];
            q[i] = carry;
        }
        k = trim(q);
        dim -= 1;
    }
    HilbertSeries { numerator: k, dim }
}

/// Number of monomials of degree `d` outside the monomial ideal, by direct enumeration.
pub fn count_standard_monomials(gens: &[Monomial], nvars: usize, d: u32) -> usize {
    monomials_of_degree(nvars, d).into_iter().filter(|m| !gens.iter().any(|g| g.divides(m))).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn examples() {
        let hs = hilbert_series(&[], 2);
        assert_eq!((hs.numerator.clone(), hs.dim), (vec![1], 2));
        let hs = hilbert_series(&[m(&[2, 0])], 2);
        assert_eq!((hs.numerator.clone(), hs.dim, hs.degree()), (vec![1, 1], 1, 2));
        let hs = hilbert_series(&[m(&[2, 0]), m(&[1, 1]), m(&[0, 3])], 2);
        assert_eq!(hs.dim, 0);
        assert_eq!(hs.degree(), 4);
        assert_eq!(hs.cumulative(3), vec![1, 3, 4, 4]);
    }

    proptest! {
        #[test]
        fn matches_direct_enumeration(gens in prop::collection::vec(prop::collection::vec(0u32..4, 3), 0..4)) {
            let gens: Vec<Monomial> = gens.iter().map(|e| m(e)).collect();
            let hs = hilbert_series(&gens, 3);
            for d in 0..=10 {
                prop_assert_eq!(hs.value(d), count_standard_monomials(&gens, 3, d) as i64);
            }
        }
    }
}
