//! Dense exact linear algebra over a [`Field`].

use super::field::Field;

pub type Matrix<E> = Vec<Vec<E>>;

/// Row echelon form in place; returns the pivot columns.
pub fn row_reduce<F: Field>(field: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !field.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = field.inv(&m[r][c]).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !field.is_zero(&m[i][c]) {
                let factor = m[i][c].clone();
                let (pivot_row, row) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                    *x = field.sub(x, &field.mul(&factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    let mut work = m.clone();
    row_reduce(field, &mut work).len()
}

/// Basis of `{ v : m v = 0 }`.
pub fn nullspace<F: Field>(field: &F, m: &Matrix<F::Elem>, cols: usize) -> Vec<Vec<F::Elem>> {
    let mut work = m.clone();
    let pivots = row_reduce(field, &mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); cols];
            v[f] = field.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(&work[row][f]);
            }
            v
        })
        .collect()
}

pub fn mat_mul<F: Field>(field: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![field.zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            let x = &a[i][l];
            if field.is_zero(x) {
                continue;
            }
            for j in 0..m {
                out[i][j] = field.add(&out[i][j], &field.mul(x, &b[l][j]));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::{PrimeField, Rationals};
    use num_rational::BigRational;

    fn q(v: i64) -> BigRational {
        Rationals.from_i64(v)
    }

    #[test]
    fn rank_and_kernel() {
        let f = Rationals;
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(1), q(0), q(1)]];
        assert_eq!(rank(&f, &m), 2);
        let ker = nullspace(&f, &m, 3);
        assert_eq!(ker.len(), 1);
        for row in &m {
            let dot = row
                .iter()
                .zip(&ker[0])
                .fold(q(0), |acc, (a, b)| acc + a * b);
            assert_eq!(dot, q(0));
        }
    }

    #[test]
    fn nilpotent_powers_over_prime_field() {
        let f = PrimeField::default();
        let n = vec![vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]];
        assert_eq!(rank(&f, &n), 2);
        let n2 = mat_mul(&f, &n, &n);
        assert_eq!(rank(&f, &n2), 1);
        assert_eq!(rank(&f, &mat_mul(&f, &n2, &n)), 0);
    }
}
