#![allow(dead_code)]

use ksep::pauli::PureState;
use ksep::states::GraphSpec;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_state(rng: &mut impl Rng, n: usize) -> PureState {
    let amps = (0..1usize << n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    PureState::normalized(amps).unwrap()
}

pub fn random_graph(rng: &mut impl Rng, n: usize) -> GraphSpec {
    let edges: Vec<(usize, usize)> = (1..=n)
        .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    GraphSpec::new(n, edges).unwrap()
}

/// Haar-ish random 2x2 unitary from a normalized complex 4-vector
/// (a quaternion), `[[a, -conj(b)], [b, conj(a)]]` times a global phase.
pub fn random_unitary(rng: &mut impl Rng) -> [[Complex64; 2]; 2] {
    let mut v: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    let a = Complex64::new(v[0], v[1]);
    let b = Complex64::new(v[2], v[3]);
    let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    [[a * phase, -b.conj() * phase], [b * phase, a.conj() * phase]]
}

/// Applies `u` to qubit `q` (zero-based, qubit 0 = most significant bit).
pub fn apply_single_qubit(state: &PureState, q: usize, u: &[[Complex64; 2]; 2]) -> PureState {
    let n = state.n();
    let bit = 1usize << (n - 1 - q);
    let src = state.amplitudes();
    let mut out = src.to_vec();
    for idx in 0..src.len() {
        if idx & bit == 0 {
            let (a0, a1) = (src[idx], src[idx | bit]);
            out[idx] = u[0][0] * a0 + u[0][1] * a1;
            out[idx | bit] = u[1][0] * a0 + u[1][1] * a1;
        }
    }
    PureState::normalized(out).unwrap()
}

/// Pass/fail line for the acceptance log.
pub fn report(id: &str, description: &str, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("[{status}] {id}: {description} ({detail})");
}
