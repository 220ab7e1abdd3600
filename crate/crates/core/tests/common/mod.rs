#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use qem_core::densesim::{Circuit, DensityMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type CMat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pauli(letter: char) -> CMat {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let v = match letter {
        'I' => [o, z, z, o],
        'X' => [z, o, o, z],
        'Y' => [z, -i, i, z],
        'Z' => [o, z, z, -o],
        _ => panic!("bad letter {letter}"),
    };
    DMatrix::from_row_slice(2, 2, &v)
}

/// Kronecker product of a word written with qubit 0 rightmost.
pub fn word(w: &str) -> CMat {
    w.chars()
        .map(pauli)
        .reduce(|acc, m| acc.kronecker(&m))
        .expect("non-empty word")
}

/// Full-register matrix of a local gate. Local index bit k belongs to
/// `targets[k]`; built by explicit index bookkeeping.
pub fn embed(local: &[Complex64], targets: &[usize], n: usize) -> CMat {
    let k = targets.len();
    let ldim = 1 << k;
    let dim = 1 << n;
    let mask: usize = targets.iter().map(|t| 1 << t).sum();
    let local_index = |x: usize| -> usize {
        targets
            .iter()
            .enumerate()
            .map(|(b, &t)| ((x >> t) & 1) << b)
            .sum()
    };
    DMatrix::from_fn(dim, dim, |row, col| {
        if row & !mask != col & !mask {
            c(0.0, 0.0)
        } else {
            local[local_index(row) * ldim + local_index(col)]
        }
    })
}

pub fn circuit_unitary(circ: &Circuit) -> CMat {
    let n = circ.n_qubits();
    let mut u = CMat::identity(1 << n, 1 << n);
    for ins in circ.ops() {
        u = embed(&ins.gate.matrix(), ins.gate.targets(), n) * u;
    }
    u
}

/// `exp(m)` by scaling and squaring with a Taylor core.
pub fn expm(m: &CMat) -> CMat {
    let norm = m.iter().map(|x| x.norm()).fold(0.0, f64::max) * m.nrows() as f64;
    let squarings = norm.log2().ceil().max(0.0) as u32 + 1;
    let scaled = m / c(2f64.powi(squarings as i32), 0.0);
    let mut term = CMat::identity(m.nrows(), m.ncols());
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &scaled / c(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Largest entry-wise deviation after removing the relative global phase.
pub fn phase_distance(a: &CMat, b: &CMat) -> f64 {
    let (idx, _) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .unwrap();
    let phase = a[idx] / b[idx];
    let phase = phase / phase.norm();
    (a - b * phase).iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn density(rho: &DensityMatrix) -> CMat {
    rho.to_dmatrix()
}

pub fn from_dense(m: &CMat) -> DensityMatrix {
    let n = m.nrows().trailing_zeros() as usize;
    let data: Vec<Complex64> = (0..m.nrows())
        .flat_map(|r| (0..m.ncols()).map(move |col| (r, col)))
        .map(|(r, col)| m[(r, col)])
        .collect();
    DensityMatrix::from_matrix(n, data).unwrap()
}

/// Random mixed state `Σ w_k |ψ_k⟩⟨ψ_k|` with Gaussian-ish amplitudes.
pub fn random_mixed(n: usize, rank: usize, r: &mut ChaCha8Rng) -> CMat {
    let dim = 1 << n;
    let mut m = CMat::zeros(dim, dim);
    let weights: Vec<f64> = (0..rank).map(|_| r.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in weights {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
            .collect();
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let psi = nalgebra::DVector::from_iterator(dim, v.into_iter().map(|x| x / norm));
        m += psi.clone() * psi.adjoint() * c(w / total, 0.0);
    }
    m
}

/// Diagonal of `m` as real probabilities.
pub fn diag(m: &CMat) -> Vec<f64> {
    (0..m.nrows()).map(|i| m[(i, i)].re).collect()
}
