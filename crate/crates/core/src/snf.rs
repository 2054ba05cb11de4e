//! Smith normal form over the integers, with the unimodular transforms.
//!
//! Only small dense matrices are needed here (the 2x2 matrices of CM
//! multipliers acting on lattice coordinates), so a plain `Vec<Vec<i64>>`
//! representation is used.

pub type IntMatrix = Vec<Vec<i64>>;

/// `diagonal = left * input * right` with `left`, `right` unimodular and
/// each nonzero diagonal entry dividing the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub left: IntMatrix,
    pub diagonal: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_0, d_1, ...` (nonnegative).
    pub fn invariants(&self) -> Vec<i64> {
        let n = self.diagonal.len().min(self.diagonal.first().map_or(0, Vec::len));
        (0..n).map(|i| self.diagonal[i][i]).collect()
    }
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let rows = a.len();
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![0i64; cols]; rows];
    for i in 0..rows {
        for k in 0..inner {
            let aik = a[i][k];
            if aik == 0 {
                continue;
            }
            for j in 0..cols {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn swap_rows(m: &mut IntMatrix, i: usize, j: usize) {
    m.swap(i, j);
}

fn swap_cols(m: &mut IntMatrix, i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

/// row[target] += factor * row[source]
fn add_row(m: &mut IntMatrix, target: usize, source: usize, factor: i64) {
    if factor == 0 {
        return;
    }
    let src = m[source].clone();
    for (t, s) in m[target].iter_mut().zip(src) {
        *t += factor * s;
    }
}

/// col[target] += factor * col[source]
fn add_col(m: &mut IntMatrix, target: usize, source: usize, factor: i64) {
    if factor == 0 {
        return;
    }
    for row in m.iter_mut() {
        row[target] += factor * row[source];
    }
}

fn negate_row(m: &mut IntMatrix, i: usize) {
    for x in m[i].iter_mut() {
        *x = -*x;
    }
}

pub fn smith_normal_form(input: &IntMatrix) -> SmithForm {
    let rows = input.len();
    let cols = input.first().map_or(0, Vec::len);
    let mut d = input.clone();
    let mut left = identity(rows);
    let mut right = identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut pivot: Option<(usize, usize)> = None;
            for (i, row) in d.iter().enumerate().skip(t) {
                for (j, &v) in row.iter().enumerate().skip(t) {
                    if v != 0 && pivot.is_none_or(|(pi, pj)| v.abs() < d[pi][pj].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return SmithForm { left, diagonal: d, right };
            };
            swap_rows(&mut d, t, pi);
            swap_rows(&mut left, t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut right, t, pj);

            let p = d[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = d[i][t].div_euclid(p);
                add_row(&mut d, i, t, -q);
                add_row(&mut left, i, t, -q);
                dirty |= d[i][t] != 0;
            }
            for j in t + 1..cols {
                let q = d[t][j].div_euclid(p);
                add_col(&mut d, j, t, -q);
                add_col(&mut right, j, t, -q);
                dirty |= d[t][j] != 0;
            }
            if dirty {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| d[i][j] % p != 0);
            match offender {
                Some((i, _)) => {
                    add_row(&mut d, t, i, 1);
                    add_row(&mut left, t, i, 1);
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            negate_row(&mut d, t);
            negate_row(&mut left, t);
        }
    }
    SmithForm { left, diagonal: d, right }
}

pub fn det2(m: &IntMatrix) -> i64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: IntMatrix) {
        let snf = smith_normal_form(&m);
        assert_eq!(mat_mul(&mat_mul(&snf.left, &m), &snf.right), snf.diagonal);
        assert_eq!(det2(&snf.left).abs(), 1);
        assert_eq!(det2(&snf.right).abs(), 1);
        let inv = snf.invariants();
        assert!(inv.iter().all(|&x| x >= 0));
        if inv[0] != 0 {
            assert_eq!(inv[1] % inv[0], 0);
        }
        assert_eq!(inv[0] * inv[1], det2(&m).abs());
    }

    #[test]
    fn negation_minus_identity() {
        let snf = smith_normal_form(&vec![vec![-2, 0], vec![0, -2]]);
        assert_eq!(snf.invariants(), vec![2, 2]);
    }

    #[test]
    fn gaussian_unit_minus_identity() {
        // i - 1 acting on Z[i]
        let snf = smith_normal_form(&vec![vec![-1, -1], vec![1, -1]]);
        assert_eq!(snf.invariants(), vec![1, 2]);
    }

    #[test]
    fn transforms_are_consistent() {
        for a in -4..=4 {
            for b in -4..=4 {
                for c in -3..=3 {
                    for d in -3..=3 {
                        check(vec![vec![a, b], vec![c, d]]);
                    }
                }
            }
        }
    }

    #[test]
    fn zero_matrix() {
        let snf = smith_normal_form(&vec![vec![0, 0], vec![0, 0]]);
        assert_eq!(snf.invariants(), vec![0, 0]);
    }
}
