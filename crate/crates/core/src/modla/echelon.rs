//! Dense row echelon forms over a prime field.

use super::field::PrimeField;

/// Incrementally built row echelon basis. Each stored row has a leading 1
/// in its pivot column and zeros before it.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: PrimeField,
    ncols: usize,
    pivot_row: Vec<Option<usize>>,
    rows: Vec<Vec<u64>>,
}

impl Echelon {
    pub fn new(field: PrimeField, ncols: usize) -> Self {
        Echelon {
            field,
            ncols,
            pivot_row: vec![None; ncols],
            rows: Vec::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Reduces `row` until its leading entry sits in a column without a
    /// pivot. Returns that column, or `None` if the row reduced to zero.
    fn reduce(&self, row: &mut [u64]) -> Option<usize> {
        let f = self.field;
        for c in 0..self.ncols {
            let a = row[c];
            if a == 0 {
                continue;
            }
            match self.pivot_row[c] {
                None => return Some(c),
                Some(r) => {
                    let prow = &self.rows[r];
                    row[c] = 0;
                    for j in c + 1..self.ncols {
                        let v = prow[j];
                        if v != 0 {
                            row[j] = f.sub(row[j], f.mul(a, v));
                        }
                    }
                }
            }
        }
        None
    }

    /// Adds a row; returns whether it was independent of the rows so far.
    pub fn insert(&mut self, mut row: Vec<u64>) -> bool {
        debug_assert_eq!(row.len(), self.ncols);
        if self.is_full() {
            return false;
        }
        match self.reduce(&mut row) {
            None => false,
            Some(c) => {
                let inv = self.field.inv(row[c]);
                for v in &mut row[c..] {
                    *v = self.field.mul(*v, inv);
                }
                self.pivot_row[c] = Some(self.rows.len());
                self.rows.push(row);
                true
            }
        }
    }

    pub fn contains(&self, row: &[u64]) -> bool {
        let mut row = row.to_vec();
        self.reduce(&mut row).is_none()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        (0..self.ncols)
            .filter(|&c| self.pivot_row[c].is_some())
            .collect()
    }

    /// Fully reduced rows, ordered by pivot column.
    pub fn into_rref(self) -> (Vec<Vec<u64>>, Vec<usize>) {
        let f = self.field;
        let pivots = self.pivot_columns();
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(pivots.len());
        let mut by_pivot = self.rows;
        let order: Vec<usize> = pivots.iter().map(|&c| self.pivot_row[c].unwrap()).collect();
        for &r in &order {
            rows.push(std::mem::take(&mut by_pivot[r]));
        }
        for i in (0..rows.len()).rev() {
            let pc = pivots[i];
            let (upper, lower) = rows.split_at_mut(i);
            let pivot = &lower[0];
            for row in upper.iter_mut() {
                let a = row[pc];
                if a == 0 {
                    continue;
                }
                for j in pc..pivot.len() {
                    let v = pivot[j];
                    if v != 0 {
                        row[j] = f.sub(row[j], f.mul(a, v));
                    }
                }
            }
        }
        (rows, pivots)
    }
}

pub fn rank(field: PrimeField, ncols: usize, rows: impl IntoIterator<Item = Vec<u64>>) -> usize {
    let mut e = Echelon::new(field, ncols);
    for r in rows {
        e.insert(r);
        if e.is_full() {
            break;
        }
    }
    e.rank()
}

/// Basis of `{v : M v = 0}` for the matrix with the given rows.
pub fn kernel(
    field: PrimeField,
    ncols: usize,
    rows: impl IntoIterator<Item = Vec<u64>>,
) -> Vec<Vec<u64>> {
    let mut e = Echelon::new(field, ncols);
    for r in rows {
        e.insert(r);
    }
    let (rref, pivots) = e.into_rref();
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0u64; ncols];
            v[free] = 1;
            for (row, &pc) in rref.iter().zip(&pivots) {
                v[pc] = field.neg(row[free]);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modla::field::DEFAULT_PRIME;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn field() -> PrimeField {
        PrimeField::new(DEFAULT_PRIME).unwrap()
    }

    #[test]
    fn rank_of_small_matrices() {
        let f = field();
        assert_eq!(
            rank(f, 3, vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 0, 1]]),
            2
        );
        assert_eq!(rank(f, 2, Vec::<Vec<u64>>::new()), 0);
        assert_eq!(rank(f, 2, vec![vec![0, 0]]), 0);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let ncols = rng.gen_range(1..12);
            let nrows = rng.gen_range(0..10);
            let base: Vec<Vec<u64>> = (0..nrows.min(4))
                .map(|_| (0..ncols).map(|_| f.random(&mut rng)).collect())
                .collect();
            // later rows are combinations of the first few
            let mut rows = base.clone();
            for _ in base.len()..nrows {
                let mut r = vec![0; ncols];
                for b in &base {
                    let c = f.random(&mut rng);
                    for j in 0..ncols {
                        r[j] = f.add(r[j], f.mul(c, b[j]));
                    }
                }
                rows.push(r);
            }
            let rk = rank(f, ncols, rows.clone());
            let ker = kernel(f, ncols, rows.clone());
            assert_eq!(rk + ker.len(), ncols);
            for v in &ker {
                for r in &rows {
                    let dot = r
                        .iter()
                        .zip(v)
                        .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                    assert_eq!(dot, 0);
                }
            }
            assert_eq!(rank(f, ncols, ker), ncols - rk);
        }
    }
}
