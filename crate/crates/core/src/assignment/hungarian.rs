use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Maximum-weight perfect matching on a square score matrix.
///
/// Returns `perm` with row `i` matched to column `perm[i]`, and the total score.
/// Runs the shortest-augmenting-path form with dual potentials, `O(n^3)`.
pub fn hungarian_assign<T: Scalar>(score: &[Vec<T>]) -> Result<(Vec<usize>, T)> {
    let n = score.len();
    for (row, r) in score.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NonSquare { rows: n, row, cols: r.len() });
        }
        if r.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("row {row} holds a non-finite score")));
        }
    }
    if n == 0 {
        return Ok((Vec::new(), T::zero()));
    }

    // 1-based arrays; column 0 is the virtual source of each augmentation.
    let cost = |i: usize, j: usize| -score[i - 1][j - 1];
    let inf = T::infinity();
    let mut u = vec![T::zero(); n + 1];
    let mut v = vec![T::zero(); n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0, j) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] = u[owner[j]] + delta;
                    v[j] = v[j] - delta;
                } else {
                    minv[j] = minv[j] - delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        while j0 != 0 {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
        }
    }

    let mut perm = vec![0; n];
    for j in 1..=n {
        perm[owner[j] - 1] = j - 1;
    }
    let total = perm.iter().enumerate().map(|(i, &j)| score[i][j]).sum();
    Ok((perm, total))
}
