//! Dense Gaussian elimination over `FieldElem`.

use crate::field::{Field, FieldElem};

/// Row-reduced echelon form in place; returns pivot columns.
pub fn rref(field: Field, rows: &mut Vec<Vec<FieldElem>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    let _ = field;
    pivots
}

pub fn rank(field: Field, rows: &[Vec<FieldElem>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(field, &mut m, ncols).len()
}

/// Basis of `{v : M v = 0}`.
pub fn nullspace(field: Field, rows: &[Vec<FieldElem>], ncols: usize) -> Vec<Vec<FieldElem>> {
    let mut m = rows.to_vec();
    let pivots = rref(field, &mut m, ncols);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (row, &pc) in m.iter().zip(pivots.iter()) {
            v[pc] = row[free].neg();
        }
        out.push(v);
    }
    out
}

/// Solves `M v = b`, returning one solution if consistent.
pub fn solve(field: Field, rows: &[Vec<FieldElem>], b: &[FieldElem], ncols: usize) -> Option<Vec<FieldElem>> {
    let mut m: Vec<Vec<FieldElem>> = rows
        .iter()
        .zip(b.iter())
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref(field, &mut m, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut v = vec![field.zero(); ncols];
    for (row, &pc) in m.iter().zip(pivots.iter()) {
        v[pc] = row[ncols].clone();
    }
    Some(v)
}

/// Incremental row-echelon accumulator over sparse rows keyed by column index.
pub struct Echelon {
    field: Field,
    rows: Vec<(usize, std::collections::BTreeMap<usize, FieldElem>)>,
}

impl Echelon {
    pub fn new(field: Field) -> Self {
        Echelon { field, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the stored pivots; stores it if independent. Returns whether it was new.
    pub fn insert(&mut self, row: std::collections::BTreeMap<usize, FieldElem>) -> bool {
        self.insert_lead(row).is_some()
    }

    /// As `insert`, returning the pivot column of the stored row.
    pub fn insert_lead(&mut self, mut row: std::collections::BTreeMap<usize, FieldElem>) -> Option<usize> {
        row.retain(|_, v| !v.is_zero());
        loop {
            let (&lead, lv) = row.iter().next()?;
            let lv = lv.clone();
            match self.rows.binary_search_by(|(p, _)| p.cmp(&lead)) {
                Ok(i) => {
                    let pr = &self.rows[i].1;
                    for (c, v) in pr {
                        let e = row.entry(*c).or_insert_with(|| self.field.zero());
                        *e = e.sub(&lv.mul(v));
                        if e.is_zero() {
                            row.remove(c);
                        }
                    }
                }
                Err(i) => {
                    let inv = lv.inv();
                    for v in row.values_mut() {
                        *v = v.mul(&inv);
                    }
                    self.rows.insert(i, (lead, row));
                    return Some(lead);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_and_rank() {
        let f = Field::Rational;
        let e = |x: i64| f.from_i64(x);
        let m = vec![vec![e(1), e(2), e(3)], vec![e(2), e(4), e(6)]];
        assert_eq!(rank(f, &m, 3), 1);
        let ns = nullspace(f, &m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot = m[0].iter().zip(v).fold(f.zero(), |a, (x, y)| a.add(&x.mul(y)));
            assert!(dot.is_zero());
        }
        let s = solve(f, &m, &[e(1), e(2)], 3).unwrap();
        assert_eq!(s[0], e(1));
        assert!(solve(f, &m, &[e(1), e(3)], 3).is_none());
    }

    #[test]
    fn echelon_counts_rank() {
        let f = Field::Prime(5);
        let mut ech = Echelon::new(f);
        let row = |v: &[(usize, i64)]| v.iter().map(|&(c, x)| (c, f.from_i64(x))).collect();
        assert!(ech.insert(row(&[(0, 1), (2, 3)])));
        assert!(ech.insert(row(&[(1, 1)])));
        assert!(!ech.insert(row(&[(0, 2), (1, 4), (2, 1)])));
        assert_eq!(ech.rank(), 2);
    }
}
