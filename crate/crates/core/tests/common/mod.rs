#![allow(dead_code)]

use num_complex::Complex64 as C64;
use pulse_tangle::linalg::{kron, ComplexMatrix};
use pulse_tangle::DensityOperator;
use rand::Rng;

/// e^A by scaling and squaring with a degree-20 Taylor polynomial. Kept
/// independent of the library's integrators.
pub fn expm(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let norm: f64 = (0..n).map(|i| (0..n).map(|j| a[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a.scale(C64::new(0.5f64.powi(squarings as i32), 0.0));
    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=20 {
        term = (&term * &scaled).scale(C64::new(1.0 / k as f64, 0.0));
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_complex<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// ρ = A A† / Tr with A a random 4×rank matrix.
pub fn random_two_qubit_state<R: Rng>(rng: &mut R, rank: usize) -> DensityOperator {
    let data = (0..4 * rank).map(|_| random_complex(rng)).collect();
    let a = ComplexMatrix::from_vec(4, rank, data).unwrap();
    let mut rho = &a * &a.dagger();
    let tr = rho.trace().re;
    rho = rho.scale(C64::new(1.0 / tr, 0.0));
    rho.hermitize();
    DensityOperator::new(rho, vec![2, 2]).unwrap()
}

/// SU(2) element from Euler angles with a global phase.
pub fn unitary2(theta: f64, phi: f64, lambda: f64, phase: f64) -> ComplexMatrix {
    let (s, co) = (theta / 2.0).sin_cos();
    let e = |x: f64| C64::from_polar(1.0, x);
    ComplexMatrix::from_vec(
        2,
        2,
        vec![e(phase) * co, -e(phase + lambda) * s, e(phase + phi) * s, e(phase + phi + lambda) * co],
    )
    .unwrap()
}

pub fn local_unitary(u: &ComplexMatrix, v: &ComplexMatrix) -> ComplexMatrix {
    kron(u, v)
}

/// Werner state p|Φ⁺⟩⟨Φ⁺| + (1−p)I/4.
pub fn werner(p: f64) -> DensityOperator {
    let mut m = ComplexMatrix::identity(4).scale(c((1.0 - p) / 4.0, 0.0));
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        m[(i, j)] += c(p / 2.0, 0.0);
    }
    DensityOperator::new(m, vec![2, 2]).unwrap()
}
