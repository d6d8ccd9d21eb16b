//! Exact linear algebra over [`Rat`].
//!
//! Square systems are solved by fraction-free (Bareiss) elimination with full
//! pivoting on an integer-scaled copy of the augmented matrix; only the final
//! back substitution touches rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rat::Rat;

/// Dense row-major matrix of rationals.
pub type RatMatrix = Vec<Vec<Rat>>;

pub fn identity(n: usize) -> RatMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

pub fn transpose(m: &[Vec<Rat>]) -> RatMatrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_vec(m: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> RatMatrix {
    let bt = transpose(b);
    a.iter().map(|row| bt.iter().map(|col| dot(row, col)).collect()).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn vec_add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Rat], s: &Rat) -> Vec<Rat> {
    a.iter().map(|x| x * s).collect()
}

/// Scales a rational row to integers; returns the row and the positive multiplier used.
fn integerize(row: &[Rat]) -> (Vec<BigInt>, BigInt) {
    let mut l = BigInt::one();
    for x in row {
        l = l.lcm(x.denom());
    }
    let ints = row.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    (ints, l)
}

struct Elimination {
    /// Upper-triangular integer rows, including any augmented columns.
    rows: Vec<Vec<BigInt>>,
    /// `col_perm[k]` is the original column sitting at position `k`.
    col_perm: Vec<usize>,
    rank: usize,
    /// Sign flips from row and column swaps.
    sign: i32,
}

/// Bareiss elimination over the first `ncols` columns; later columns ride along.
fn bareiss(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> Elimination {
    let nrows = rows.len();
    let mut col_perm: Vec<usize> = (0..ncols).collect();
    let mut prev = BigInt::one();
    let mut sign = 1;
    let mut rank = 0;
    for k in 0..nrows.min(ncols) {
        // full pivoting: smallest nonzero magnitude in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in k..nrows {
            for j in k..ncols {
                if rows[i][j].is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if rows[bi][bj].abs() <= rows[i][j].abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        if pi != k {
            rows.swap(pi, k);
            sign = -sign;
        }
        if pj != k {
            for row in rows.iter_mut() {
                row.swap(pj, k);
            }
            col_perm.swap(pj, k);
            sign = -sign;
        }
        let width = rows[k].len();
        let (head, tail) = rows.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail.iter_mut() {
            let factor = row[k].clone();
            for j in (k + 1)..width {
                let v = &pivot_row[k] * &row[j] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = rows[k][k].clone();
        rank += 1;
    }
    Elimination { rows, col_perm, rank, sign }
}

pub fn determinant(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    if n == 0 {
        return Rat::one();
    }
    assert!(m.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    let mut scale = BigInt::one();
    let rows = m
        .iter()
        .map(|row| {
            let (ints, l) = integerize(row);
            scale *= l;
            ints
        })
        .collect();
    let elim = bareiss(rows, n);
    if elim.rank < n {
        return Rat::zero();
    }
    let det = elim.rows[n - 1][n - 1].clone() * BigInt::from(elim.sign);
    Rat::new(det, scale)
}

pub fn rank(m: &[Vec<Rat>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    let ncols = m[0].len();
    let rows = m.iter().map(|row| integerize(row).0).collect();
    bareiss(rows, ncols).rank
}

/// Solves `a x = b_j` for every right-hand side column `b_j`.
///
/// Returns `None` when `a` is singular.
pub fn solve_many(a: &[Vec<Rat>], rhs: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n), "solve needs a square matrix");
    let nrhs = rhs.len();
    assert!(rhs.iter().all(|b| b.len() == n));
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut full: Vec<Rat> = a[i].clone();
            full.extend(rhs.iter().map(|b| b[i].clone()));
            integerize(&full).0
        })
        .collect();
    let elim = bareiss(rows, n);
    if elim.rank < n {
        return None;
    }
    let u = &elim.rows;
    let mut out = Vec::with_capacity(nrhs);
    for c in 0..nrhs {
        let mut y = vec![Rat::zero(); n];
        for k in (0..n).rev() {
            let mut acc = Rat::from_int(u[k][n + c].clone());
            for j in (k + 1)..n {
                acc -= &(Rat::from_int(u[k][j].clone()) * &y[j]);
            }
            y[k] = acc / Rat::from_int(u[k][k].clone());
        }
        let mut x = vec![Rat::zero(); n];
        for (pos, &orig) in elim.col_perm.iter().enumerate() {
            x[orig] = y[pos].clone();
        }
        out.push(x);
    }
    Some(out)
}

pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    solve_many(a, &[b.to_vec()]).map(|mut v| v.remove(0))
}

pub fn inverse(a: &[Vec<Rat>]) -> Option<RatMatrix> {
    let cols = solve_many(a, &identity(a.len()))?;
    Some(transpose(&cols))
}

/// Solves the possibly overdetermined system `a x = b` (a is m×k with full
/// column rank k). Returns `None` if inconsistent.
pub fn solve_consistent(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let m = a.len();
    let k = if m == 0 { 0 } else { a[0].len() };
    if k == 0 {
        return b.iter().all(Rat::is_zero).then(Vec::new);
    }
    // pick k independent rows greedily, solve, then check the rest
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    for i in 0..m {
        let mut trial: Vec<Vec<Rat>> = chosen.iter().map(|&c| a[c].clone()).collect();
        trial.push(a[i].clone());
        if rank(&trial) == trial.len() {
            chosen.push(i);
            if chosen.len() == k {
                break;
            }
        }
    }
    if chosen.len() < k {
        return None;
    }
    let sub: Vec<Vec<Rat>> = chosen.iter().map(|&c| a[c].clone()).collect();
    let rhs: Vec<Rat> = chosen.iter().map(|&c| b[c].clone()).collect();
    let x = solve(&sub, &rhs)?;
    (0..m).all(|i| dot(&a[i], &x) == b[i]).then_some(x)
}
