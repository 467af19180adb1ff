//! Truncated Hilbert space of two qubits and two resonator modes.
//!
//! The total excitation `q1 + q2 + n1 + n2` commutes with the Hamiltonian, so
//! the space is stored as a list of excitation sectors `N = 0..=M`. Within a
//! sector, states are ordered lexicographically on `(q1, q2, n1)`; `n2` is then
//! fixed by `N`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Qubit-pair configurations in the standard basis order `ee, eg, ge, gg`.
pub const QUBIT_CONFIGS: [(u8, u8); 4] = [(1, 1), (1, 0), (0, 1), (0, 0)];

/// Position of the qubit configuration `(q1, q2)` in the standard basis order.
#[inline]
pub fn qubit_index(q1: u8, q2: u8) -> usize {
    usize::from(1 - q1) * 2 + usize::from(1 - q2)
}

/// One product state `|q1 q2⟩|n1⟩|n2⟩`. Qubit occupation 1 means excited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisState {
    pub q1: u8,
    pub q2: u8,
    pub n1: usize,
    pub n2: usize,
}

impl BasisState {
    pub fn new(q1: u8, q2: u8, n1: usize, n2: usize) -> Self {
        debug_assert!(q1 <= 1 && q2 <= 1);
        Self { q1, q2, n1, n2 }
    }

    #[inline]
    pub fn excitation(&self) -> usize {
        usize::from(self.q1) + usize::from(self.q2) + self.n1 + self.n2
    }

    #[inline]
    pub fn qubit_excitation(&self) -> usize {
        usize::from(self.q1) + usize::from(self.q2)
    }

    /// Index of the qubit part in the `ee, eg, ge, gg` order.
    #[inline]
    pub fn qubit_index(&self) -> usize {
        qubit_index(self.q1, self.q2)
    }
}

/// Closed-form dimension of excitation sector `n`.
pub fn sector_dim(n: usize) -> usize {
    match n {
        0 => 1,
        1 => 4,
        _ => 4 * n,
    }
}

/// Ordered basis of a single excitation sector.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    excitation: usize,
    states: Vec<BasisState>,
    index: HashMap<BasisState, usize>,
}

impl SectorBasis {
    pub fn new(excitation: usize) -> Self {
        let mut states = Vec::with_capacity(sector_dim(excitation));
        for q1 in 0..=1u8 {
            for q2 in 0..=1u8 {
                let qubits = usize::from(q1 + q2);
                if qubits > excitation {
                    continue;
                }
                let photons = excitation - qubits;
                for n1 in 0..=photons {
                    states.push(BasisState::new(q1, q2, n1, photons - n1));
                }
            }
        }
        let index = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        Self {
            excitation,
            states,
            index,
        }
    }

    #[inline]
    pub fn excitation(&self) -> usize {
        self.excitation
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    #[inline]
    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    #[inline]
    pub fn state(&self, i: usize) -> BasisState {
        self.states[i]
    }

    #[inline]
    pub fn position(&self, state: &BasisState) -> Option<usize> {
        self.index.get(state).copied()
    }
}

/// All sectors `N = 0..=m`.
pub fn build_sectors(m: usize) -> Vec<SectorBasis> {
    (0..=m).map(SectorBasis::new).collect()
}

/// The full truncated space: sectors up to the excitation cutoff `M`.
#[derive(Debug, Clone)]
pub struct TruncatedSpace {
    truncation: usize,
    sectors: Vec<SectorBasis>,
}

impl TruncatedSpace {
    pub fn new(truncation: usize) -> Self {
        Self {
            truncation,
            sectors: build_sectors(truncation),
        }
    }

    #[inline]
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    #[inline]
    pub fn sectors(&self) -> &[SectorBasis] {
        &self.sectors
    }

    #[inline]
    pub fn sector(&self, n: usize) -> &SectorBasis {
        &self.sectors[n]
    }

    pub fn total_dim(&self) -> usize {
        self.sectors.iter().map(SectorBasis::dim).sum()
    }

    /// `(sector, position)` of a basis state, or `None` if it lies above the cutoff.
    pub fn locate(&self, state: &BasisState) -> Option<(usize, usize)> {
        let n = state.excitation();
        if n > self.truncation {
            return None;
        }
        self.sectors[n].position(state).map(|i| (n, i))
    }
}

/// Excitation cutoff `ceil(10 + 2α²)` that makes a single-mode coherent state
/// of amplitude `alpha` safe to truncate.
pub fn truncation_bound<T: Real>(alpha: T) -> Result<usize> {
    let alpha = alpha.as_f64();
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::Domain(format!(
            "coherent amplitude must be a non-negative real, got {alpha}"
        )));
    }
    // Absorb roundoff so that exact integers (e.g. α = 10 → 210) do not round up.
    let raw = 10.0 + 2.0 * alpha * alpha;
    Ok((raw - 1e-9).ceil() as usize)
}

/// Fock amplitudes `A_n = αⁿ e^{-α²/2} / √(n!)` of a real coherent state, `n = 0..=M`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentTable<T> {
    alpha: T,
    amps: Vec<T>,
}

impl<T: Real> CoherentTable<T> {
    pub fn new(alpha: T, m: usize) -> Result<Self> {
        if !(alpha >= T::zero()) {
            return Err(Error::Domain(format!(
                "coherent amplitude must be non-negative, got {alpha}"
            )));
        }
        let mut amps = Vec::with_capacity(m + 1);
        let mut a = (-alpha * alpha / T::lit(2.0)).exp();
        amps.push(a);
        for n in 1..=m {
            a = a * alpha / T::from_usize_lossy(n).sqrt();
            amps.push(a);
        }
        Ok(Self { alpha, amps })
    }

    #[inline]
    pub fn alpha(&self) -> T {
        self.alpha
    }

    #[inline]
    pub fn truncation(&self) -> usize {
        self.amps.len() - 1
    }

    #[inline]
    pub fn amps(&self) -> &[T] {
        &self.amps
    }

    #[inline]
    pub fn amp(&self, n: usize) -> T {
        self.amps[n]
    }

    /// `Σ A_n²` over the retained photon numbers.
    pub fn mass(&self) -> T {
        self.amps.iter().fold(T::zero(), |acc, &a| acc + a * a)
    }

    /// Probability mass lost to truncation, `1 − Σ A_n²`.
    pub fn leakage(&self) -> T {
        T::one() - self.mass()
    }

    /// Amplitudes rescaled to unit norm on the truncated space.
    pub fn normalized(&self) -> Vec<T> {
        let scale = self.mass().sqrt();
        self.amps.iter().map(|&a| a / scale).collect()
    }
}

/// Coherent amplitude table for `alpha` with photon numbers `0..=m`.
pub fn coherent_amplitudes<T: Real>(alpha: T, m: usize) -> Result<CoherentTable<T>> {
    CoherentTable::new(alpha, m)
}
