//! Small dense helpers: symmetric eigenvalues and support connectivity.

use nalgebra::DMatrix;

/// Eigenvalues of a symmetric `n x n` row-major matrix, sorted ascending.
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n, "matrix must be n x n");
    let m = DMatrix::from_row_slice(n, n, a);
    // symmetrize to remove rounding asymmetry in the input
    let m = (&m + m.transpose()) * 0.5;
    let mut eig: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Whether the undirected graph on `n` vertices with an edge `{i, j}`
/// whenever `edge(i, j)` is connected.
pub fn is_connected(n: usize, edge: impl Fn(usize, usize) -> bool) -> bool {
    if n <= 1 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for (j, seen_j) in seen.iter_mut().enumerate() {
            if !*seen_j && (edge(i, j) || edge(j, i)) {
                *seen_j = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count == n
}
