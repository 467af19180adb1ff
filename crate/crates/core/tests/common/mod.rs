//! Independent reference implementations used by the integration tests.
//!
//! Nothing here goes through the sector machinery: the full-space Hamiltonian
//! is built from Kronecker products, its exponential by Taylor series with
//! scaling and squaring, and the uncoupled resonant case is solved per site
//! in closed form.

#![allow(dead_code)]

use hopjc::{BasisState, Complex, PureState, TruncatedSpace};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use std::sync::Arc;

pub type C = Complex<f64>;

pub fn cr(x: f64) -> C {
    Complex::new(x, 0.0)
}

fn kron(a: &DMatrix<C>, b: &DMatrix<C>) -> DMatrix<C> {
    a.kronecker(b)
}

fn annihilation(cut: usize) -> DMatrix<C> {
    DMatrix::from_fn(cut + 1, cut + 1, |r, c| if c == r + 1 { cr((c as f64).sqrt()) } else { cr(0.0) })
}

/// `|g⟩⟨e|` with basis `(e, g)` = indices `(0, 1)`.
fn lowering() -> DMatrix<C> {
    let mut s = DMatrix::from_element(2, 2, cr(0.0));
    s[(1, 0)] = cr(1.0);
    s
}

/// Full product space `qubit1 ⊗ qubit2 ⊗ mode1 ⊗ mode2`, each mode cut at `cut`.
pub struct FullSpace {
    pub cut: usize,
}

impl FullSpace {
    pub fn dim(&self) -> usize {
        4 * (self.cut + 1) * (self.cut + 1)
    }

    pub fn index(&self, s: &BasisState) -> usize {
        let q1 = 1 - s.q1 as usize;
        let q2 = 1 - s.q2 as usize;
        let m = self.cut + 1;
        ((q1 * 2 + q2) * m + s.n1) * m + s.n2
    }

    pub fn hamiltonian(&self, g: f64, delta: f64, j: f64) -> DMatrix<C> {
        let i2 = DMatrix::<C>::identity(2, 2);
        let im = DMatrix::<C>::identity(self.cut + 1, self.cut + 1);
        let a = annihilation(self.cut);
        let sm = lowering();
        let sp = sm.adjoint();

        let a1 = kron(&kron(&i2, &i2), &kron(&a, &im));
        let a2 = kron(&kron(&i2, &i2), &kron(&im, &a));
        let s1m = kron(&kron(&sm, &i2), &kron(&im, &im));
        let s2m = kron(&kron(&i2, &sm), &kron(&im, &im));
        let s1p = kron(&kron(&sp, &i2), &kron(&im, &im));
        let s2p = kron(&kron(&i2, &sp), &kron(&im, &im));
        let a1d = a1.adjoint();
        let a2d = a2.adjoint();

        let num = &a1d * &a1 + &a2d * &a2;
        let jc = &s1p * &a1 + &s1m * &a1d + &s2p * &a2 + &s2m * &a2d;
        let hop = &a1d * &a2 + &a1 * &a2d;
        num * cr(delta) + jc * cr(g) + hop * cr(j)
    }

    pub fn embed(&self, state: &PureState) -> DVector<C> {
        let mut v = DVector::from_element(self.dim(), cr(0.0));
        for (s, a) in state.iter() {
            v[self.index(&s)] = a;
        }
        v
    }

    pub fn extract(&self, v: &DVector<C>, space: Arc<TruncatedSpace>) -> PureState {
        let mut out = PureState::zeros(space.clone());
        for sector in space.sectors() {
            for s in sector.states() {
                out.set_amplitude(s, v[self.index(s)]).unwrap();
            }
        }
        out
    }
}

/// `e^{-iHt}` by Taylor series after scaling to unit norm, then squaring.
pub fn expm_minus_i(h: &DMatrix<C>, t: f64) -> DMatrix<C> {
    let a = h * Complex::new(0.0, -t);
    let norm = a.iter().map(|z| z.norm()).fold(0.0, f64::max) * a.nrows() as f64;
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a / cr(2f64.powi(squarings as i32));
    let n = h.nrows();
    let mut result = DMatrix::<C>::identity(n, n);
    let mut term = DMatrix::<C>::identity(n, n);
    for k in 1..=30 {
        term = &term * &scaled / cr(k as f64);
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Two uncoupled resonant JC sites (`J = 0`, `Δ = 0`) solved in closed form.
///
/// Amplitudes are indexed `[qubit1][n1][qubit2][n2]` with qubit `0 = e`, `1 = g`.
#[derive(Clone)]
pub struct TwoSiteJc {
    pub cut: usize,
    pub amp: Vec<C>,
}

impl TwoSiteJc {
    pub fn zeros(cut: usize) -> Self {
        Self {
            cut,
            amp: vec![cr(0.0); 4 * (cut + 1) * (cut + 1)],
        }
    }

    fn idx(&self, a: usize, n1: usize, b: usize, n2: usize) -> usize {
        let m = self.cut + 1;
        ((a * m + n1) * 2 + b) * m + n2
    }

    pub fn get(&self, a: usize, n1: usize, b: usize, n2: usize) -> C {
        self.amp[self.idx(a, n1, b, n2)]
    }

    pub fn set(&mut self, a: usize, n1: usize, b: usize, n2: usize, v: C) {
        let i = self.idx(a, n1, b, n2);
        self.amp[i] = v;
    }

    /// Single-site resonant JC map for `(qubit, n)` after time `t`:
    /// `|e,n⟩ → cos(√(n+1)t)|e,n⟩ − i sin(√(n+1)t)|g,n+1⟩`,
    /// `|g,n⟩ → cos(√n t)|g,n⟩ − i sin(√n t)|e,n−1⟩`.
    fn site_map(q: usize, n: usize, t: f64) -> Vec<(usize, usize, C)> {
        if q == 0 {
            let w = ((n + 1) as f64).sqrt() * t;
            vec![(0, n, cr(w.cos())), (1, n + 1, Complex::new(0.0, -w.sin()))]
        } else if n == 0 {
            vec![(1, 0, cr(1.0))]
        } else {
            let w = (n as f64).sqrt() * t;
            vec![(1, n, cr(w.cos())), (0, n - 1, Complex::new(0.0, -w.sin()))]
        }
    }

    /// Evolves both sites; photons beyond `cut` must carry no amplitude.
    pub fn evolve(&self, t: f64) -> Self {
        let mut out = Self::zeros(self.cut);
        for a in 0..2 {
            for n1 in 0..=self.cut {
                for b in 0..2 {
                    for n2 in 0..=self.cut {
                        let v = self.get(a, n1, b, n2);
                        if v.norm_sqr() == 0.0 {
                            continue;
                        }
                        for (a2, m1, c1) in Self::site_map(a, n1, t) {
                            for (b2, m2, c2) in Self::site_map(b, n2, t) {
                                assert!(m1 <= self.cut && m2 <= self.cut, "oracle cut too small");
                                let i = self.idx(a2, m1, b2, m2);
                                out.amp[i] += v * c1 * c2;
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Copies a sector-decomposed state; `cut` must exceed its truncation.
    pub fn from_state(state: &PureState, cut: usize) -> Self {
        let mut out = Self::zeros(cut);
        for (s, a) in state.iter() {
            out.set(1 - s.q1 as usize, s.n1, 1 - s.q2 as usize, s.n2, a);
        }
        out
    }

    pub fn gg_grid(&self) -> DMatrix<C> {
        DMatrix::from_fn(self.cut + 1, self.cut + 1, |l, m| self.get(1, l, 1, m))
    }

    /// Two-qubit reduced state in the order `ee, eg, ge, gg`.
    pub fn qubit_rho(&self) -> DMatrix<C> {
        let mut rho = DMatrix::from_element(4, 4, cr(0.0));
        for r in 0..4 {
            for c in 0..4 {
                let (a, b) = (r / 2, r % 2);
                let (x, y) = (c / 2, c % 2);
                let mut acc = cr(0.0);
                for n1 in 0..=self.cut {
                    for n2 in 0..=self.cut {
                        acc += self.get(a, n1, b, n2) * self.get(x, n1, y, n2).conj();
                    }
                }
                rho[(r, c)] = acc;
            }
        }
        rho
    }

    pub fn project(&self, bra: &[f64]) -> [C; 4] {
        let mut out = [cr(0.0); 4];
        for (k, o) in out.iter_mut().enumerate() {
            let (a, b) = (k / 2, k % 2);
            for n1 in 0..=self.cut.min(bra.len() - 1) {
                for n2 in 0..=self.cut.min(bra.len() - 1) {
                    *o += self.get(a, n1, b, n2) * bra[n1] * bra[n2];
                }
            }
        }
        out
    }
}

/// Entropy of field 1 from the Schmidt coefficients of a normalized grid.
pub fn schmidt_entropy(grid: &DMatrix<C>) -> f64 {
    grid.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .map(|s| s * s)
        .filter(|&p| p > 1e-12)
        .map(|p| -p * p.log2())
        .sum()
}

/// Concurrence from the eigenvalues of `ρ σ_yσ_y ρ* σ_yσ_y`, via Schur form.
pub fn wootters_by_xi(rho: &DMatrix<C>) -> f64 {
    let mut y = DMatrix::from_element(4, 4, cr(0.0));
    y[(0, 3)] = cr(-1.0);
    y[(1, 2)] = cr(1.0);
    y[(2, 1)] = cr(1.0);
    y[(3, 0)] = cr(-1.0);
    let xi = rho * &y * rho.map(|z| z.conj()) * &y;
    let schur = nalgebra::Schur::new(xi);
    let (_, t) = schur.unpack();
    let mut lam: Vec<f64> = (0..4).map(|i| t[(i, i)].re.max(0.0)).collect();
    lam.sort_by(|a, b| b.partial_cmp(a).unwrap());
    (lam[0].sqrt() - lam[1].sqrt() - lam[2].sqrt() - lam[3].sqrt()).max(0.0)
}

/// `2|a_ee a_gg − a_eg a_ge|` for normalized amplitudes.
pub fn pure_concurrence(a: &[C; 4]) -> f64 {
    2.0 * (a[0] * a[3] - a[1] * a[2]).norm()
}

pub fn random_qubit_state(rng: &mut impl Rng) -> [C; 4] {
    let mut a = [cr(0.0); 4];
    for z in &mut a {
        *z = Complex::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
    }
    let n: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut a {
        *z /= n;
    }
    a
}

/// Random normalized state with complex amplitudes on every basis vector.
pub fn random_state(space: Arc<TruncatedSpace>, rng: &mut impl Rng) -> PureState {
    let mut s = PureState::zeros(space.clone());
    for sector in space.sectors() {
        for b in sector.states() {
            s.set_amplitude(b, Complex::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .unwrap();
        }
    }
    s.normalize().unwrap();
    s
}
