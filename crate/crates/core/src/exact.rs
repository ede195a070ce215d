//! Exact integer linear algebra for small systems.
//!
//! Rank and null-space computations here never touch floating point: the
//! elimination is fraction-free (Bareiss), so every intermediate entry is an
//! integer minor of the input, and the null vector is recovered by rational
//! back-substitution and rescaled to a primitive integer vector.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

/// Row echelon form of an integer matrix, with the pivot column of each
/// nonzero row.
#[derive(Debug, Clone)]
pub struct RowEchelon {
    rows: Vec<Vec<BigInt>>,
    pivot_cols: Vec<usize>,
    n_cols: usize,
}

impl RowEchelon {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivot_cols
    }
}

/// Fraction-free (integer-preserving) Gaussian elimination. Each row
/// operation is a cross-multiplication `(b/g)*row_r - (a/g)*row_i`, so no
/// entry ever leaves the integers; rows are reduced to primitive vectors
/// after each step to keep entries small.
pub fn row_echelon(matrix: &[Vec<i64>]) -> RowEchelon {
    let n_cols = matrix.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|r| {
            debug_assert_eq!(r.len(), n_cols);
            r.iter().map(|&e| BigInt::from(e)).collect()
        })
        .collect();
    let n_rows = rows.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(pr) = (r..n_rows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let pivot = rows[r][c].clone();
        for i in r + 1..n_rows {
            if rows[i][c].is_zero() {
                continue;
            }
            let factor = rows[i][c].clone();
            let g = pivot.gcd(&factor);
            let mp = &pivot / &g;
            let mf = &factor / &g;
            for j in c..n_cols {
                let v = &rows[i][j] * &mp - &mf * &rows[r][j];
                rows[i][j] = v;
            }
            reduce_row(&mut rows[i]);
        }
        pivot_cols.push(c);
        r += 1;
    }
    RowEchelon {
        rows,
        pivot_cols,
        n_cols,
    }
}

/// Divides a row by the gcd of its entries (no-op on the zero row).
fn reduce_row(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for e in row.iter() {
        g = g.gcd(e);
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for e in row.iter_mut() {
        *e = &*e / &g;
    }
}

/// One primitive integer null vector of the echelon system, or `None` when
/// the matrix has full column rank. The free variable with the smallest
/// column index is set to 1; pivot variables are solved by rational
/// back-substitution; the result is scaled integral, divided by its gcd, and
/// sign-normalized so the first nonzero entry is positive.
pub fn null_space_vector(ech: &RowEchelon) -> Option<Vec<BigInt>> {
    let n = ech.n_cols;
    if ech.rank() == n {
        return None;
    }
    let free_col = (0..n).find(|c| !ech.pivot_cols.contains(c))?;
    let mut x: Vec<BigRational> = vec![BigRational::zero(); n];
    x[free_col] = BigRational::one();
    for (row_idx, &pc) in ech.pivot_cols.iter().enumerate().rev() {
        let row = &ech.rows[row_idx];
        let mut acc = BigRational::zero();
        for c in pc + 1..n {
            if !row[c].is_zero() && !x[c].is_zero() {
                acc += BigRational::from(row[c].clone()) * &x[c];
            }
        }
        x[pc] = -acc / BigRational::from(row[pc].clone());
    }
    // Scale by the lcm of denominators, then reduce to a primitive vector.
    let mut lcm = BigInt::one();
    for v in &x {
        lcm = lcm.lcm(v.denom());
    }
    let mut out: Vec<BigInt> = x
        .iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect();
    canonicalize(&mut out);
    Some(out)
}

/// Divides out the gcd and flips signs so the first nonzero entry is positive.
/// No-op on the zero vector.
pub fn canonicalize(v: &mut [BigInt]) {
    let mut gcd = BigInt::zero();
    for e in v.iter() {
        gcd = gcd.gcd(e);
    }
    if gcd.is_zero() {
        return;
    }
    if !gcd.is_one() {
        for e in v.iter_mut() {
            *e = &*e / &gcd;
        }
    }
    if let Some(first) = v.iter().find(|e| !e.is_zero()) {
        if first.is_negative() {
            for e in v.iter_mut() {
                *e = -&*e;
            }
        }
    }
}

/// Converts to `i64` entries; `None` on overflow.
pub fn to_i64_vector(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(i64::try_from).collect::<Result<_, _>>().ok()
}
