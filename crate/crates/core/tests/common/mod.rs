//! Reference implementations used only by the integration tests. They work
//! on plain nested `Vec`s and share no code with the library.
#![allow(dead_code)]

use num_complex::Complex64;

pub type Matrix = Vec<Vec<Complex64>>;

pub fn choose(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

pub fn outer(amps: &[Complex64]) -> Matrix {
    amps.iter()
        .map(|a| amps.iter().map(|b| a * b.conj()).collect())
        .collect()
}

pub fn phase(rho: &Matrix, phi: f64) -> Matrix {
    let mut out = rho.clone();
    for (n, row) in out.iter_mut().enumerate() {
        for (m, z) in row.iter_mut().enumerate() {
            *z *= Complex64::from_polar(1.0, phi * (n as f64 - m as f64));
        }
    }
    out
}

/// Element-wise loss: `ρ'_{n−i,m−i} += √(C(n,i)C(m,i)) (1−η)^i η^{(n+m)/2−i} ρ_{nm}`.
pub fn loss(rho: &Matrix, eta: f64) -> Matrix {
    let dim = rho.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for n in 0..dim {
        for m in 0..dim {
            for i in 0..=n.min(m) {
                let w = (choose(n, i) * choose(m, i)).sqrt()
                    * (1.0 - eta).powi(i as i32)
                    * eta.powf((n + m) as f64 / 2.0 - i as f64);
                out[n - i][m - i] += rho[n][m] * w;
            }
        }
    }
    out
}

pub fn reverse(rho: &Matrix, m: usize) -> Matrix {
    let dim = rho.len();
    let idx = |k: usize| if k <= m { m - k } else { k };
    let mut out = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for r in 0..dim {
        for c in 0..dim {
            out[idx(r)][idx(c)] = rho[r][c];
        }
    }
    out
}

/// `rounds` passes of `phase(φ+ϑ) → loss(η₁) → reverse → phase(ϑ) → loss(η₂)`.
pub fn round_trip(
    amps: &[Complex64],
    phi: f64,
    theta: f64,
    eta1: f64,
    eta2: f64,
    rounds: usize,
) -> Matrix {
    let m = amps.len() - 1;
    let mut rho = outer(amps);
    for _ in 0..rounds {
        rho = loss(&phase(&rho, phi + theta), eta1);
        rho = reverse(&rho, m);
        rho = loss(&phase(&rho, theta), eta2);
    }
    rho
}

pub fn optimal_amplitudes(m: usize) -> Vec<Complex64> {
    let levels = (m + 1) as f64;
    (0..=m)
        .map(|n| {
            let s = (std::f64::consts::PI * (n as f64 + 0.5) / levels).sin();
            Complex64::new((2.0 / levels).sqrt() * s, 0.0)
        })
        .collect()
}

pub fn mm_amplitudes(m: usize, m_prime: usize) -> Vec<Complex64> {
    let mut amps = vec![Complex64::new(0.0, 0.0); m + 1];
    amps[m] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[m_prime] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps
}

pub fn max_abs_diff(a: &Matrix, b: &roundtrip_core::fock::DensityMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for (r, row) in a.iter().enumerate() {
        for (c, z) in row.iter().enumerate() {
            worst = worst.max((z - b.get(r, c)).norm());
        }
    }
    worst
}
