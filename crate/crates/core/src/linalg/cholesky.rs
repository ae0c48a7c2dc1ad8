use std::collections::VecDeque;

use thiserror::Error;

use super::CsrMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FactorError {
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("non-positive pivot {value:e} at row {row}")]
    NotPositiveDefinite { row: usize, value: f64 },
}

/// Reverse Cuthill–McKee ordering, starting each component from a
/// pseudo-peripheral vertex. Returns `perm` with `perm[new] = old`.
pub fn reverse_cuthill_mckee(a: &CsrMatrix) -> Vec<usize> {
    let n = a.nrows();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|r| a.row(r).map(|(c, _)| c).filter(|&c| c != r).collect())
        .collect();
    let degree = |v: usize| adj[v].len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);

    let bfs_levels = |start: usize, mask: &[bool]| -> (Vec<usize>, usize) {
        let mut level = vec![usize::MAX; n];
        level[start] = 0;
        let mut queue = VecDeque::from([start]);
        let mut seen = vec![start];
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !mask[w] && level[w] == usize::MAX {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                    seen.push(w);
                }
            }
        }
        let depth = seen.iter().map(|&v| level[v]).max().unwrap_or(0);
        let last: Vec<usize> = seen.into_iter().filter(|&v| level[v] == depth).collect();
        (last, depth)
    };

    for seed in 0..n {
        if visited[seed] {
            continue;
        }
        // pseudo-peripheral start: repeat BFS from a min-degree vertex of the
        // last level while the eccentricity grows
        let mut start = seed;
        let (mut last, mut depth) = bfs_levels(start, &visited);
        loop {
            let cand = *last
                .iter()
                .min_by_key(|&&v| (degree(v), v))
                .expect("non-empty level");
            let (l2, d2) = bfs_levels(cand, &visited);
            if d2 > depth {
                start = cand;
                last = l2;
                depth = d2;
            } else {
                break;
            }
        }
        let mut queue = VecDeque::from([start]);
        visited[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !visited[w]).collect();
            next.sort_by_key(|&w| (degree(w), w));
            for w in next {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

/// Row-oriented envelope (skyline) Cholesky factor `P A Pᵀ = L Lᵀ`.
pub struct EnvelopeCholesky {
    perm: Vec<usize>,
    first: Vec<usize>,
    /// Row `i` of `L` from column `first[i]` through the diagonal.
    rows: Vec<Vec<f64>>,
}

impl EnvelopeCholesky {
    pub fn factor(a: &CsrMatrix) -> Result<Self, FactorError> {
        let n = a.nrows();
        if n != a.ncols() {
            return Err(FactorError::NotSquare(n, a.ncols()));
        }
        let perm = reverse_cuthill_mckee(a);
        let mut inv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for old_r in 0..n {
            let r = inv[old_r];
            for (old_c, _) in a.row(old_r) {
                let c = inv[old_c];
                if c < r {
                    first[r] = first[r].min(c);
                }
            }
        }
        let mut rows: Vec<Vec<f64>> = (0..n).map(|i| vec![0.0; i - first[i] + 1]).collect();
        for old_r in 0..n {
            let r = inv[old_r];
            for (old_c, v) in a.row(old_r) {
                let c = inv[old_c];
                if c <= r {
                    rows[r][c - first[r]] = v;
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            for j in fi..=i {
                let fj = first[j];
                let lo = fi.max(fj);
                let mut s = rows[i][j - fi];
                {
                    let ri = &rows[i][lo - fi..j - fi];
                    let rj = &rows[j][lo - fj..j - fj];
                    s -= ri.iter().zip(rj).map(|(x, y)| x * y).sum::<f64>();
                }
                if j < i {
                    rows[i][j - fi] = s / rows[j][j - fj];
                } else {
                    if !(s > 0.0) {
                        return Err(FactorError::NotPositiveDefinite {
                            row: perm[i],
                            value: s,
                        });
                    }
                    rows[i][i - fi] = s.sqrt();
                }
            }
        }
        Ok(EnvelopeCholesky { perm, first, rows })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Number of stored factor entries.
    pub fn envelope_size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.rows[i];
            let s: f64 = row[..i - fi]
                .iter()
                .zip(&y[fi..i])
                .map(|(l, v)| l * v)
                .sum();
            y[i] = (y[i] - s) / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.rows[i];
            y[i] /= row[i - fi];
            let yi = y[i];
            for (k, l) in row[..i - fi].iter().enumerate() {
                y[fi + k] -= l * yi;
            }
        }
        let mut x = vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::TripletBuilder;

    fn grid_laplacian(m: usize, shift: f64) -> CsrMatrix {
        let n = m * m;
        let mut b = TripletBuilder::new(n, n);
        for i in 0..m {
            for j in 0..m {
                let v = i * m + j;
                b.push(v, v, shift);
                for (di, dj) in [(1, 0), (0, 1)] {
                    let w = ((i + di) % m) * m + (j + dj) % m;
                    b.push(v, v, 1.0);
                    b.push(w, w, 1.0);
                    b.push(v, w, -1.0);
                    b.push(w, v, -1.0);
                }
            }
        }
        b.build()
    }

    #[test]
    fn solves_periodic_grid_system() {
        let a = grid_laplacian(9, 0.1);
        let f = EnvelopeCholesky::factor(&a).unwrap();
        let x_true: Vec<f64> = (0..81).map(|i| ((i * 7) % 13) as f64 - 6.0).collect();
        let b = a.matvec(&x_true);
        let x = f.solve(&b);
        let err = x
            .iter()
            .zip(&x_true)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
        assert!(f.envelope_size() < 81 * 82 / 2);
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let a = grid_laplacian(4, -1.0);
        assert!(matches!(
            EnvelopeCholesky::factor(&a),
            Err(FactorError::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn rcm_is_a_permutation() {
        let a = grid_laplacian(6, 1.0);
        let mut p = reverse_cuthill_mckee(&a);
        p.sort();
        assert_eq!(p, (0..36).collect::<Vec<_>>());
    }
}
