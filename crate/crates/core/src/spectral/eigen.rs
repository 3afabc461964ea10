use faer::{Mat, Side};

use crate::error::{Error, Result};
use crate::fock::{OperatorMatrix, StateVector, C64, ZERO};

/// Cluster width used when rotating exactly degenerate eigenvectors away from
/// the truncation edge.
const ROTATION_CLUSTER_TOL: f64 = 1e-9;
/// Singular values below this fraction of the largest are treated as zero modes.
const ZERO_MODE_TOL: f64 = 1e-11;
/// Hermiticity tolerance on the input.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Edge weight below which an eigenvector counts as reliable.
pub const RELIABILITY_TOL: f64 = 1e-8;

/// One eigenpair, with its vector stored on the connected block it lives in.
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub energy: f64,
    pub block: usize,
    pub local: Vec<C64>,
    pub edge_weight: f64,
    pub reliable: bool,
}

/// Full spectrum of a Hermitian operator.
///
/// The operator is split into the connected blocks of its sparsity graph;
/// eigenvectors are kept block-local, which is exact and keeps memory linear
/// in the block sizes.
#[derive(Clone, Debug)]
pub struct EigenSolution {
    dim: usize,
    blocks: Vec<Vec<usize>>,
    pairs: Vec<EigenPair>,
    norm: f64,
    max_residual: f64,
}

impl EigenSolution {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[EigenPair] {
        &self.pairs
    }

    pub fn pair(&self, k: usize) -> &EigenPair {
        &self.pairs[k]
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.energy).collect()
    }

    pub fn reliable_eigenvalues(&self) -> Vec<f64> {
        self.pairs
            .iter()
            .filter(|p| p.reliable)
            .map(|p| p.energy)
            .collect()
    }

    /// Global indices spanned by the block of pair `k`.
    pub fn support(&self, k: usize) -> &[usize] {
        &self.blocks[self.pairs[k].block]
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Row-sum bound on `‖H‖`.
    pub fn operator_norm_bound(&self) -> f64 {
        self.norm
    }

    pub fn max_residual(&self) -> f64 {
        self.max_residual
    }

    pub fn vector(&self, k: usize) -> StateVector {
        let mut v = StateVector::zeros(self.dim);
        for (&g, &a) in self.support(k).iter().zip(&self.pairs[k].local) {
            v.amplitudes[g] = a;
        }
        v
    }

    /// `⟨ψ_k | v⟩`.
    pub fn overlap(&self, k: usize, v: &StateVector) -> C64 {
        self.support(k)
            .iter()
            .zip(&self.pairs[k].local)
            .map(|(&g, a)| a.conj() * v.amplitudes[g])
            .sum()
    }

    /// Largest `|⟨ψ_i|ψ_j⟩ − δ_ij|`; quadratic in the block sizes.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (b, _) in self.blocks.iter().enumerate() {
            let members: Vec<&EigenPair> = self.pairs.iter().filter(|p| p.block == b).collect();
            for (i, p) in members.iter().enumerate() {
                for (j, q) in members.iter().enumerate().skip(i) {
                    let dot: C64 = p.local.iter().zip(&q.local).map(|(a, b)| a.conj() * b).sum();
                    let target = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((dot - target).norm());
                }
            }
        }
        worst
    }
}

/// Connected blocks of the sparsity graph, each sorted, ordered by smallest index.
pub fn connected_blocks(h: &OperatorMatrix) -> Vec<Vec<usize>> {
    let n = h.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (r, c, _) in h.iter() {
        let (a, b) = (find(&mut parent, r), find(&mut parent, c));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        if label[root] == usize::MAX {
            label[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[label[root]].push(i);
    }
    blocks
}

/// Eigenvalues ascending and eigenvectors as columns of a small dense Hermitian matrix.
pub(crate) fn dense_eigh(m: &Mat<C64>) -> Result<(Vec<f64>, Mat<C64>)> {
    if m.nrows() == 0 {
        return Ok((Vec::new(), Mat::zeros(0, 0)));
    }
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let values = (0..m.nrows()).map(|i| evd.S().column_vector()[i].re).collect();
    Ok((values, evd.U().to_owned()))
}

fn local_matrix(h: &OperatorMatrix, block: &[usize], pos: &[usize]) -> Mat<C64> {
    let mut m = Mat::<C64>::zeros(block.len(), block.len());
    for (i, &g) in block.iter().enumerate() {
        for (c, v) in h.row(g) {
            m[(i, pos[c])] = v;
        }
    }
    m
}

/// `(energy, local vector)` pairs of one block.
type LocalPairs = Vec<(f64, Vec<C64>)>;

fn solve_general(m: &Mat<C64>) -> Result<LocalPairs> {
    let (values, vectors) = dense_eigh(m)?;
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(j, e)| (e, (0..m.nrows()).map(|i| vectors[(i, j)]).collect()))
        .collect())
}

/// `H = [[0, M], [M†, 0]]` on the block: eigenpairs from the SVD of `M`.
fn solve_chiral(m: &Mat<C64>, a_rows: &[usize], b_rows: &[usize]) -> Result<LocalPairs> {
    let n = a_rows.len() + b_rows.len();
    let off = Mat::<C64>::from_fn(a_rows.len(), b_rows.len(), |i, j| m[(a_rows[i], b_rows[j])]);
    let svd = off
        .svd()
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let (u, v) = (svd.U(), svd.V());
    let s: Vec<f64> = (0..a_rows.len().min(b_rows.len()))
        .map(|i| svd.S().column_vector()[i].re)
        .collect();
    let cut = ZERO_MODE_TOL * s.first().copied().unwrap_or(0.0).max(1.0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n);
    let polarized_a = |j: usize| {
        let mut x = vec![ZERO; n];
        for (i, &r) in a_rows.iter().enumerate() {
            x[r] = u[(i, j)];
        }
        x
    };
    let polarized_b = |j: usize| {
        let mut x = vec![ZERO; n];
        for (i, &r) in b_rows.iter().enumerate() {
            x[r] = v[(i, j)];
        }
        x
    };
    for (j, &sj) in s.iter().enumerate() {
        if sj <= cut {
            out.push((0.0, polarized_a(j)));
            out.push((0.0, polarized_b(j)));
            continue;
        }
        for sign in [1.0, -1.0] {
            let mut x = vec![ZERO; n];
            for (i, &r) in a_rows.iter().enumerate() {
                x[r] = u[(i, j)] * h;
            }
            for (i, &r) in b_rows.iter().enumerate() {
                x[r] = v[(i, j)] * (sign * h);
            }
            out.push((sign * sj, x));
        }
    }
    for j in s.len()..a_rows.len() {
        out.push((0.0, polarized_a(j)));
    }
    for j in s.len()..b_rows.len() {
        out.push((0.0, polarized_b(j)));
    }
    Ok(out)
}

fn rayleigh(m: &Mat<C64>, x: &[C64]) -> f64 {
    let n = x.len();
    let mut acc = ZERO;
    for i in 0..n {
        if x[i] == ZERO {
            continue;
        }
        let mut row = ZERO;
        for j in 0..n {
            row += m[(i, j)] * x[j];
        }
        acc += x[i].conj() * row;
    }
    acc.re
}

/// Inside each cluster of (numerically) equal energies, rotate to the basis
/// that diagonalizes the edge projector so truncation artifacts separate out.
fn rotate_degenerate(pairs: &mut LocalPairs, m: &Mat<C64>, edge: &[bool]) -> Result<()> {
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut start = 0;
    while start < pairs.len() {
        let e = pairs[start].0;
        let mut end = start + 1;
        while end < pairs.len()
            && pairs[end].0 - e <= ROTATION_CLUSTER_TOL * e.abs().max(1.0)
        {
            end += 1;
        }
        if end - start > 1 {
            let k = end - start;
            let g = Mat::<C64>::from_fn(k, k, |a, b| {
                (0..edge.len())
                    .filter(|&i| edge[i])
                    .map(|i| pairs[start + a].1[i].conj() * pairs[start + b].1[i])
                    .sum()
            });
            let (_, q) = dense_eigh(&g)?;
            let old: Vec<Vec<C64>> = pairs[start..end].iter().map(|p| p.1.clone()).collect();
            for b in 0..k {
                let x: Vec<C64> = (0..old[0].len())
                    .map(|i| (0..k).map(|a| old[a][i] * q[(a, b)]).sum())
                    .collect();
                let energy = rayleigh(m, &x);
                pairs[start + b] = (energy, x);
            }
        }
        start = end;
    }
    Ok(())
}

/// Exact dense diagonalization.
///
/// `edge[i]` marks basis vectors on the truncation boundary; `sublattice`, when
/// given, marks B-sublattice indices and enables the SVD path on blocks with
/// no same-sublattice couplings.
pub fn exact_diagonalize(
    h: &OperatorMatrix,
    edge: &[bool],
    sublattice: Option<&[bool]>,
) -> Result<EigenSolution> {
    let dim = h.dim();
    if edge.len() != dim {
        return Err(Error::DimensionMismatch { left: dim, right: edge.len() });
    }
    if let Some(s) = sublattice {
        if s.len() != dim {
            return Err(Error::DimensionMismatch { left: dim, right: s.len() });
        }
    }
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian { max_asymmetry: defect });
    }
    let norm = (0..dim)
        .map(|r| h.row(r).map(|(_, v)| v.norm()).sum::<f64>())
        .fold(0.0, f64::max);

    let blocks = connected_blocks(h);
    let mut pos = vec![0usize; dim];
    let mut pairs = Vec::with_capacity(dim);
    let mut max_residual: f64 = 0.0;
    for (b, block) in blocks.iter().enumerate() {
        for (i, &g) in block.iter().enumerate() {
            pos[g] = i;
        }
        let m = local_matrix(h, block, &pos);
        let local_edge: Vec<bool> = block.iter().map(|&g| edge[g]).collect();
        let chiral = sublattice.filter(|s| {
            block
                .iter()
                .all(|&r| h.row(r).all(|(c, _)| s[r] != s[c]))
        });
        let mut local = match chiral {
            Some(s) if block.len() > 1 => {
                let a_rows: Vec<usize> = (0..block.len()).filter(|&i| !s[block[i]]).collect();
                let b_rows: Vec<usize> = (0..block.len()).filter(|&i| s[block[i]]).collect();
                solve_chiral(&m, &a_rows, &b_rows)?
            }
            _ => solve_general(&m)?,
        };
        rotate_degenerate(&mut local, &m, &local_edge)?;
        for (energy, x) in local {
            let mut r2 = 0.0;
            for i in 0..block.len() {
                let mut hx = ZERO;
                for (c, v) in h.row(block[i]) {
                    hx += v * x[pos[c]];
                }
                r2 += (hx - x[i] * energy).norm_sqr();
            }
            max_residual = max_residual.max(r2.sqrt());
            let edge_weight: f64 = x
                .iter()
                .zip(&local_edge)
                .filter(|(_, &e)| e)
                .map(|(a, _)| a.norm_sqr())
                .sum();
            pairs.push(EigenPair {
                energy,
                block: b,
                local: x,
                edge_weight,
                reliable: edge_weight < RELIABILITY_TOL,
            });
        }
    }
    if max_residual > 1e-10 * norm.max(f64::MIN_POSITIVE) && max_residual > 1e-13 {
        return Err(Error::Eigensolver(format!(
            "residual {max_residual:e} exceeds 1e-10 * |H| = {:e}",
            1e-10 * norm
        )));
    }
    pairs.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.block.cmp(&b.block)));
    Ok(EigenSolution {
        dim,
        blocks,
        pairs,
        norm,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ONE;

    fn dense_reference(h: &OperatorMatrix) -> Vec<f64> {
        let n = h.dim();
        let m = Mat::<C64>::from_fn(n, n, |i, j| h.get(i, j));
        dense_eigh(&m).unwrap().0
    }

    fn pseudo_random_hermitian(n: usize, seed: u64) -> OperatorMatrix {
        let mut state = seed;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, C64::from(next())));
            for j in i + 1..n {
                if next() > 0.1 {
                    continue;
                }
                let v = C64::new(next(), next());
                t.push((i, j, v));
                t.push((j, i, v.conj()));
            }
        }
        OperatorMatrix::from_triplets(n, t)
    }

    #[test]
    fn zero_operator_has_zero_spectrum() {
        let sol = exact_diagonalize(&OperatorMatrix::zeros(5), &[false; 5], None).unwrap();
        assert_eq!(sol.eigenvalues(), vec![0.0; 5]);
        assert_eq!(sol.blocks().len(), 5);
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = OperatorMatrix::from_triplets(2, [(0, 1, ONE)]);
        let err = exact_diagonalize(&h, &[false; 2], None).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { max_asymmetry } if (max_asymmetry - 1.0).abs() < 1e-15));
    }

    #[test]
    fn matches_single_dense_solve() {
        let h = pseudo_random_hermitian(30, 7);
        let sol = exact_diagonalize(&h, &[false; 30], None).unwrap();
        for (a, b) in sol.eigenvalues().iter().zip(dense_reference(&h)) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(sol.orthonormality_defect() < 1e-12);
    }

    #[test]
    fn chiral_path_matches_dense() {
        // bipartite random operator: only A-B couplings
        let n = 13;
        let sub: Vec<bool> = (0..n).map(|i| i % 3 == 0).collect();
        let base = pseudo_random_hermitian(n, 11);
        let h = OperatorMatrix::from_triplets(
            n,
            base.iter().filter(|&(r, c, _)| sub[r] != sub[c]),
        );
        let sol = exact_diagonalize(&h, &[false; 13], Some(&sub)).unwrap();
        let reference = dense_reference(&h);
        for (a, b) in sol.eigenvalues().iter().zip(&reference) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        assert!(sol.orthonormality_defect() < 1e-12);
        // unbalanced sublattices force zero modes polarized on the larger one
        let zeros: Vec<usize> = (0..sol.len()).filter(|&k| sol.pair(k).energy.abs() < 1e-12).collect();
        assert!(zeros.len() >= 13 - 2 * 5);
    }

    #[test]
    fn degenerate_edge_weight_is_rotated_out() {
        // all-ones matrix: eigenvalue 3 and a two-fold zero level
        let h = OperatorMatrix::from_triplets(
            3,
            (0..3).flat_map(|i| (0..3).map(move |j| (i, j, ONE))),
        );
        let sol = exact_diagonalize(&h, &[false, false, true], None).unwrap();
        let zero: Vec<&EigenPair> = sol.pairs().iter().filter(|p| p.energy.abs() < 1e-12).collect();
        assert_eq!(zero.len(), 2);
        assert_eq!(zero.iter().filter(|p| p.reliable).count(), 1);
        assert!((zero.iter().map(|p| p.edge_weight).sum::<f64>() - 2.0 / 3.0).abs() < 1e-12);
        assert!(!sol.pair(2).reliable);
    }

    #[test]
    fn blocks_follow_sparsity() {
        let h = OperatorMatrix::from_triplets(4, [(0, 2, ONE), (2, 0, ONE), (1, 1, ONE)]);
        assert_eq!(connected_blocks(&h), vec![vec![0, 2], vec![1], vec![3]]);
    }

    #[test]
    fn dense_vector_round_trip() {
        let h = pseudo_random_hermitian(8, 3);
        let sol = exact_diagonalize(&h, &[false; 8], None).unwrap();
        for k in 0..sol.len() {
            let v = sol.vector(k);
            assert!((sol.overlap(k, &v).re - 1.0).abs() < 1e-12);
            let hv = h.apply(&v);
            let e = sol.pair(k).energy;
            let res: f64 = hv
                .amplitudes
                .iter()
                .zip(&v.amplitudes)
                .map(|(a, b)| (a - b * e).norm_sqr())
                .sum();
            assert!(res.sqrt() < 1e-12);
        }
    }
}
