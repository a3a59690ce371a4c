//! Exact Gaussian elimination for `A x = b`.

use crate::field::{pow_mod, Field, Scalar};

/// Returns a solution of `A x = b` or `None` when the system is
/// inconsistent. Pivots are taken at the leftmost available column and free
/// variables are set to zero, so the answer is canonical for a given system.
pub fn solve(field: Field, a: &[Vec<Scalar>], b: &[Scalar], ncols: usize) -> Option<Vec<Scalar>> {
    assert_eq!(a.len(), b.len());
    match field {
        Field::Prime(p) => {
            let rows: Vec<Vec<u64>> =
                a.iter().map(|r| r.iter().map(Field::residue).collect()).collect();
            let rhs: Vec<u64> = b.iter().map(Field::residue).collect();
            solve_prime(p, rows, rhs, ncols).map(|x| x.into_iter().map(Scalar::Residue).collect())
        }
        Field::Rationals => solve_generic(field, a.to_vec(), b.to_vec(), ncols),
    }
}

pub(crate) fn solve_prime(p: u64, mut a: Vec<Vec<u64>>, mut b: Vec<u64>, ncols: usize) -> Option<Vec<u64>> {
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == nrows {
            break;
        }
        let Some(piv) = (row..nrows).find(|&r| a[r][col] != 0) else { continue };
        a.swap(row, piv);
        b.swap(row, piv);
        let inv = pow_mod(a[row][col], p - 2, p);
        for v in a[row][col..].iter_mut() {
            *v = *v * inv % p;
        }
        b[row] = b[row] * inv % p;
        let (pivot_row, pivot_b) = (a[row].clone(), b[row]);
        for r in 0..nrows {
            if r == row || a[r][col] == 0 {
                continue;
            }
            let factor = a[r][col];
            let target = &mut a[r];
            for c in col..ncols {
                if pivot_row[c] != 0 {
                    target[c] = (target[c] + (p - factor) * pivot_row[c]) % p;
                }
            }
            b[r] = (b[r] + (p - factor) * pivot_b) % p;
        }
        pivots.push(col);
        row += 1;
    }
    if b[row..].iter().any(|&v| v != 0) {
        return None;
    }
    let mut x = vec![0; ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r];
    }
    Some(x)
}

pub(crate) fn solve_generic(
    f: Field,
    mut a: Vec<Vec<Scalar>>,
    mut b: Vec<Scalar>,
    ncols: usize,
) -> Option<Vec<Scalar>> {
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == nrows {
            break;
        }
        let Some(piv) = (row..nrows).find(|&r| !f.is_zero(&a[r][col])) else { continue };
        a.swap(row, piv);
        b.swap(row, piv);
        let inv = f.inv(&a[row][col]).expect("nonzero pivot");
        for v in a[row][col..].iter_mut() {
            *v = f.mul(v, &inv);
        }
        b[row] = f.mul(&b[row], &inv);
        let (pivot_row, pivot_b) = (a[row].clone(), b[row].clone());
        for r in 0..nrows {
            if r == row || f.is_zero(&a[r][col]) {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..ncols {
                if !f.is_zero(&pivot_row[c]) {
                    a[r][c] = f.sub(&a[r][c], &f.mul(&factor, &pivot_row[c]));
                }
            }
            b[r] = f.sub(&b[r], &f.mul(&factor, &pivot_b));
        }
        pivots.push(col);
        row += 1;
    }
    if b[row..].iter().any(|v| !f.is_zero(v)) {
        return None;
    }
    let mut x = vec![f.zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn residues(v: &[i64], f: Field) -> Vec<Scalar> {
        v.iter().map(|&x| f.from_i64(x)).collect()
    }

    #[test]
    fn small_system() {
        let f = Field::prime(7).unwrap();
        // x + y = 3, x - y = 1
        let a = vec![residues(&[1, 1], f), residues(&[1, -1], f)];
        let x = solve(f, &a, &residues(&[3, 1], f), 2).unwrap();
        assert_eq!(x, residues(&[2, 1], f));
    }

    #[test]
    fn inconsistent_and_free() {
        let q = Field::Rationals;
        let a = vec![residues(&[1, 2], q), residues(&[2, 4], q)];
        assert!(solve(q, &a, &residues(&[1, 3], q), 2).is_none());
        // Free second variable is set to zero.
        assert_eq!(solve(q, &a, &residues(&[1, 2], q), 2).unwrap(), residues(&[1, 0], q));
    }

    #[test]
    fn prime_path_matches_generic() {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let (n, m) = (rng.random_range(1..7), rng.random_range(1..7));
            let a: Vec<Vec<Scalar>> =
                (0..n).map(|_| (0..m).map(|_| f.random(&mut rng)).collect()).collect();
            let b: Vec<Scalar> = (0..n).map(|_| f.random(&mut rng)).collect();
            let fast = solve(f, &a, &b, m);
            let slow = solve_generic(f, a.clone(), b.clone(), m);
            assert_eq!(fast, slow);
            if let Some(x) = fast {
                for (row, rhs) in a.iter().zip(&b) {
                    let lhs = row.iter().zip(&x).fold(f.zero(), |acc, (u, v)| f.add(&acc, &f.mul(u, v)));
                    assert_eq!(&lhs, rhs);
                }
            }
        }
    }
}
