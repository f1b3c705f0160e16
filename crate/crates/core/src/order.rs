//! Monomial orders: lex, grevlex, block orders over a variable subset, and weight orders.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::monomial::Monomial;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    /// Lexicographic with `x_0 > x_1 > ...`.
    Lex,
    /// Graded reverse lexicographic with `x_0 > x_1 > ...`.
    Grevlex,
    /// Compare the variables flagged in `first` with `first_order`, then the rest with `rest_order`.
    Block { first: Vec<bool>, first_order: Box<MonomialOrder>, rest_order: Box<MonomialOrder> },
    /// Compare by the weight `w . e` first (larger is bigger), then by `tie`.
    Weighted { weights: Vec<u32>, tie: Box<MonomialOrder> },
}

impl MonomialOrder {
    /// Elimination order for the flagged variables: any monomial involving them beats one that doesn't.
    pub fn elimination(eliminate: &[bool]) -> MonomialOrder {
        MonomialOrder::Block {
            first: eliminate.to_vec(),
            first_order: Box::new(MonomialOrder::Grevlex),
            rest_order: Box::new(MonomialOrder::Grevlex),
        }
    }

    pub fn weighted(weights: Vec<u32>, tie: MonomialOrder) -> MonomialOrder {
        MonomialOrder::Weighted { weights, tie: Box::new(tie) }
    }

    pub fn is_graded(&self) -> bool {
        match self {
            MonomialOrder::Grevlex => true,
            MonomialOrder::Weighted { weights, .. } => weights.iter().all(|&w| w == 1),
            _ => false,
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.as_slice().cmp(b.as_slice()),
            MonomialOrder::Grevlex => grevlex(a.as_slice(), b.as_slice()),
            MonomialOrder::Block { first, first_order, rest_order } => {
                let (a1, a2) = split(a, first);
                let (b1, b2) = split(b, first);
                first_order.cmp(&a1, &b1).then_with(|| rest_order.cmp(&a2, &b2))
            }
            MonomialOrder::Weighted { weights, tie } => {
                let wa: u64 = a.exponents().zip(weights).map(|(e, &w)| e as u64 * w as u64).sum();
                let wb: u64 = b.exponents().zip(weights).map(|(e, &w)| e as u64 * w as u64).sum();
                wa.cmp(&wb).then_with(|| tie.cmp(a, b))
            }
        }
    }

    /// Same order on a ring with `k` extra trailing variables, which are compared last
    /// within every component (they get weight zero and sit at the end of grevlex/lex).
    pub fn extended(&self, k: usize) -> MonomialOrder {
        match self {
            MonomialOrder::Lex | MonomialOrder::Grevlex => self.clone(),
            MonomialOrder::Block { first, first_order, rest_order } => {
                let mut f = first.clone();
                f.extend(std::iter::repeat_n(false, k));
                MonomialOrder::Block {
                    first: f,
                    first_order: Box::new(first_order.extended(k)),
                    rest_order: Box::new(rest_order.extended(k)),
                }
            }
            MonomialOrder::Weighted { weights, tie } => {
                let mut w = weights.clone();
                w.extend(std::iter::repeat_n(0, k));
                MonomialOrder::Weighted { weights: w, tie: Box::new(tie.extended(k)) }
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::Lex => "lex".into(),
            MonomialOrder::Grevlex => "grevlex".into(),
            MonomialOrder::Block { first, first_order, rest_order } => {
                let idx: Vec<String> =
                    first.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| i.to_string()).collect();
                format!("block[{}]({},{})", idx.join(","), first_order.name(), rest_order.name())
            }
            MonomialOrder::Weighted { weights, tie } => {
                let w: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
                format!("weight[{}]({})", w.join(","), tie.name())
            }
        }
    }
}

fn split(m: &Monomial, mask: &[bool]) -> (Monomial, Monomial) {
    let mut a = m.clone();
    let mut b = m.clone();
    for (i, &f) in mask.iter().enumerate() {
        if f {
            b.set_exp(i, 0);
        } else {
            a.set_exp(i, 0);
        }
    }
    (a, b)
}

fn grevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                // smaller exponent in the last differing variable wins
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn grevlex_prefers_smaller_last_exponent() {
        let o = MonomialOrder::Grevlex;
        assert_eq!(o.cmp(&m(&[1, 1, 0]), &m(&[1, 0, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 3]), &m(&[2, 0])), Ordering::Greater);
        assert_eq!(MonomialOrder::Lex.cmp(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
    }

    #[test]
    fn elimination_order_eliminates() {
        let o = MonomialOrder::elimination(&[false, true, false]);
        assert_eq!(o.cmp(&m(&[0, 1, 0]), &m(&[9, 0, 9])), Ordering::Greater);
    }

    fn order_strategy() -> impl Strategy<Value = MonomialOrder> {
        prop_oneof![
            Just(MonomialOrder::Lex),
            Just(MonomialOrder::Grevlex),
            Just(MonomialOrder::elimination(&[true, false, true])),
            Just(MonomialOrder::weighted(vec![2, 0, 1], MonomialOrder::Grevlex)),
        ]
    }

    proptest! {
        #[test]
        fn orders_are_multiplicative(o in order_strategy(),
                                     a in prop::collection::vec(0u32..5, 3),
                                     b in prop::collection::vec(0u32..5, 3),
                                     c in prop::collection::vec(0u32..5, 3)) {
            let (a, b, c) = (m(&a), m(&b), m(&c));
            prop_assert_eq!(o.cmp(&a, &b), o.cmp(&a.mul(&c), &b.mul(&c)));
            prop_assert_eq!(o.cmp(&a, &b) == Ordering::Equal, a == b);
            prop_assert_ne!(o.cmp(&a.mul(&c), &Monomial::one(3)), Ordering::Less);
        }
    }
}
