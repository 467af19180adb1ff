//! Sector-decomposed pure states and their exact propagation.
//!
//! Each sector block is diagonalized once, `H_N = V_N D_N V_N†`, after which
//! `ψ_N(t) = V_N e^{-i D_N t} V_N† ψ_N(0)` at any `t` without time stepping.

use std::sync::Arc;

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::{BasisState, CoherentTable, TruncatedSpace};
use crate::model::{Hamiltonian, SectorHamiltonian, SystemParams};
use crate::scalar::{cabs, creal, czero, phase_factor, Real};

/// Initial state of the qubit pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QubitState<T> {
    Eg,
    Ge,
    Gg,
    Ee,
    /// `(|e₁g₂⟩ + |g₁e₂⟩)/√2`
    BellPlus,
    /// Explicit amplitudes in the order `ee, eg, ge, gg`.
    Amplitudes([Complex<T>; 4]),
}

impl<T: Real> QubitState<T> {
    /// Amplitudes in the order `ee, eg, ge, gg`.
    pub fn amplitudes(&self) -> [Complex<T>; 4] {
        let one = creal(T::one());
        let zero = czero();
        match *self {
            QubitState::Ee => [one, zero, zero, zero],
            QubitState::Eg => [zero, one, zero, zero],
            QubitState::Ge => [zero, zero, one, zero],
            QubitState::Gg => [zero, zero, zero, one],
            QubitState::BellPlus => {
                let h = creal(T::lit(0.5).sqrt());
                [zero, h, h, zero]
            }
            QubitState::Amplitudes(a) => a,
        }
    }
}

/// Complex amplitudes stored as one vector per excitation sector.
#[derive(Debug, Clone)]
pub struct PureState<T: Real> {
    space: Arc<TruncatedSpace>,
    blocks: Vec<DVector<Complex<T>>>,
}

impl<T: Real> PureState<T> {
    pub fn zeros(space: Arc<TruncatedSpace>) -> Self {
        let blocks = space
            .sectors()
            .iter()
            .map(|s| DVector::from_element(s.dim(), czero()))
            .collect();
        Self { space, blocks }
    }

    pub fn from_blocks(space: Arc<TruncatedSpace>, blocks: Vec<DVector<Complex<T>>>) -> Result<Self> {
        if blocks.len() != space.sectors().len()
            || blocks.iter().zip(space.sectors()).any(|(b, s)| b.len() != s.dim())
        {
            return Err(Error::Config("block layout does not match the sector basis".into()));
        }
        Ok(Self { space, blocks })
    }

    /// `(qubits) ⊗ |α⟩ ⊗ |α⟩` restricted to the truncated space, not renormalized.
    pub fn product(
        space: Arc<TruncatedSpace>,
        qubits: &QubitState<T>,
        table: &CoherentTable<T>,
    ) -> Result<Self> {
        let m = space.truncation();
        if table.truncation() < m {
            return Err(Error::Config(format!(
                "coherent table holds {} photons, space needs {m}",
                table.truncation()
            )));
        }
        let amps = qubits.amplitudes();
        let mut state = Self::zeros(space);
        for (n, block) in state.blocks.iter_mut().enumerate() {
            for (i, s) in state.space.sector(n).states().iter().enumerate() {
                let a = amps[s.qubit_index()];
                block[i] = a * (table.amp(s.n1) * table.amp(s.n2));
            }
        }
        Ok(state)
    }

    #[inline]
    pub fn space(&self) -> &Arc<TruncatedSpace> {
        &self.space
    }

    #[inline]
    pub fn truncation(&self) -> usize {
        self.space.truncation()
    }

    #[inline]
    pub fn blocks(&self) -> &[DVector<Complex<T>>] {
        &self.blocks
    }

    #[inline]
    pub fn block(&self, n: usize) -> &DVector<Complex<T>> {
        &self.blocks[n]
    }

    /// Amplitude of a basis state; zero above the truncation.
    pub fn amplitude(&self, state: &BasisState) -> Complex<T> {
        match self.space.locate(state) {
            Some((n, i)) => self.blocks[n][i],
            None => czero(),
        }
    }

    pub fn set_amplitude(&mut self, state: &BasisState, value: Complex<T>) -> Result<()> {
        let (n, i) = self.space.locate(state).ok_or_else(|| {
            Error::Config(format!("{state:?} lies above truncation {}", self.truncation()))
        })?;
        self.blocks[n][i] = value;
        Ok(())
    }

    /// `‖block_N‖²` for every sector.
    pub fn sector_weights(&self) -> Vec<T> {
        self.blocks.iter().map(|b| b.norm_squared()).collect()
    }

    pub fn norm_squared(&self) -> T {
        self.sector_weights().into_iter().fold(T::zero(), |a, b| a + b)
    }

    pub fn norm(&self) -> T {
        self.norm_squared().sqrt()
    }

    /// Rescales to unit norm and returns the squared norm it had.
    pub fn normalize(&mut self) -> Result<T> {
        let w = self.norm_squared();
        if !(w > T::zero()) {
            return Err(Error::Domain("cannot normalize a zero state".into()));
        }
        let s = creal(T::one() / w.sqrt());
        for b in &mut self.blocks {
            *b *= s;
        }
        Ok(w)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        self.check_same_space(other.truncation())?;
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .fold(czero(), |acc, (a, b)| acc + a.dotc(b)))
    }

    /// Largest absolute amplitude difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.check_same_space(other.truncation())?;
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| cabs(*x - *y)))
            .fold(T::zero(), |a, b| a.max(b)))
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &Self) -> Result<T> {
        self.check_same_space(other.truncation())?;
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .fold(T::zero(), |acc, (a, b)| acc + (a - b).norm_squared())
            .sqrt())
    }

    /// Iterates `(basis state, amplitude)` over the whole space.
    pub fn iter(&self) -> impl Iterator<Item = (BasisState, Complex<T>)> + '_ {
        self.space
            .sectors()
            .iter()
            .zip(&self.blocks)
            .flat_map(|(s, b)| s.states().iter().copied().zip(b.iter().copied()))
    }

    fn check_same_space(&self, m: usize) -> Result<()> {
        if self.truncation() != m {
            return Err(Error::Config(format!(
                "truncation mismatch: {} vs {m}",
                self.truncation()
            )));
        }
        Ok(())
    }
}

/// Normalized `(qubits) ⊗ |α⟩ ⊗ |α⟩` on a given space.
pub fn prepare_initial_on<T: Real>(
    space: Arc<TruncatedSpace>,
    qubits: &QubitState<T>,
    alpha: T,
) -> Result<PureState<T>> {
    let amps = qubits.amplitudes();
    let norm = amps.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr());
    if (norm - T::one()).abs() > T::tol(1e-12) {
        return Err(Error::Domain(format!(
            "qubit amplitudes must be normalized, squared norm is {norm}"
        )));
    }
    let table = CoherentTable::new(alpha, space.truncation())?;
    let mut state = PureState::product(space, qubits, &table)?;
    state.normalize()?;
    Ok(state)
}

/// Normalized initial state for `params`, on a freshly built space.
pub fn prepare_initial<T: Real>(qubits: &QubitState<T>, params: &SystemParams<T>) -> Result<PureState<T>> {
    prepare_initial_on(
        Arc::new(TruncatedSpace::new(params.truncation())),
        qubits,
        params.alpha,
    )
}

/// Probability mass of the ideal product state that falls outside the space.
pub fn truncation_leakage<T: Real>(
    space: Arc<TruncatedSpace>,
    qubits: &QubitState<T>,
    alpha: T,
) -> Result<T> {
    let table = CoherentTable::new(alpha, space.truncation())?;
    let state = PureState::product(space, qubits, &table)?;
    Ok(T::one() - state.norm_squared())
}

/// Spectral decomposition of one sector block.
#[derive(Debug, Clone)]
pub struct SectorEigen<T: Real> {
    pub energies: DVector<T>,
    pub vectors: DMatrix<Complex<T>>,
}

impl<T: Real> SectorEigen<T> {
    pub fn new(h: &SectorHamiltonian<T>) -> Result<Self> {
        let dim = h.matrix.nrows();
        let max_iter = 1000 * dim.max(1);
        let eps = T::default_epsilon();
        let numerical = |message: &str| Error::Numerical {
            sector: h.excitation,
            message: message.to_string(),
        };
        if h.matrix.iter().all(|z| z.im == T::zero()) {
            // Real symmetric blocks (all built-in parameter sets) are cheaper
            // to diagonalize in real arithmetic.
            let re = h.matrix.map(|z| z.re);
            let eig = SymmetricEigen::try_new(re, eps, max_iter)
                .ok_or_else(|| numerical("symmetric eigensolver did not converge"))?;
            Ok(Self {
                energies: eig.eigenvalues,
                vectors: eig.eigenvectors.map(creal),
            })
        } else {
            let eig = SymmetricEigen::try_new(h.matrix.clone(), eps, max_iter)
                .ok_or_else(|| numerical("Hermitian eigensolver did not converge"))?;
            Ok(Self {
                energies: eig.eigenvalues,
                vectors: eig.eigenvectors,
            })
        }
    }

    /// `max |V D V† − H|`.
    pub fn reconstruction_error(&self, h: &SectorHamiltonian<T>) -> T {
        let d = DMatrix::from_diagonal(&self.energies.map(creal));
        let r = &self.vectors * d * self.vectors.adjoint() - &h.matrix;
        r.iter().fold(T::zero(), |acc, z| acc.max(cabs(*z)))
    }

    fn apply(&self, block: &DVector<Complex<T>>, t: T) -> DVector<Complex<T>> {
        let mut coeffs = self.vectors.ad_mul(block);
        for (c, &e) in coeffs.iter_mut().zip(self.energies.iter()) {
            *c *= phase_factor(e * t);
        }
        &self.vectors * coeffs
    }
}

/// `e^{-iHt}` for every sector, reusable across times.
#[derive(Debug, Clone)]
pub struct Propagator<T: Real> {
    space: Arc<TruncatedSpace>,
    sectors: Vec<Option<SectorEigen<T>>>,
    skipped: Vec<usize>,
}

impl<T: Real> Propagator<T> {
    /// Diagonalizes every sector of `hamiltonian`.
    pub fn new(hamiltonian: &Hamiltonian<T>) -> Result<Self> {
        Self::with_skip(hamiltonian, |_| false)
    }

    /// Diagonalizes every sector except those for which `skip(N)` holds.
    /// Skipped sectors are left untouched by [`evolve`].
    pub fn with_skip(hamiltonian: &Hamiltonian<T>, skip: impl Fn(usize) -> bool + Sync) -> Result<Self> {
        let sectors = hamiltonian
            .sectors()
            .par_iter()
            .map(|h| {
                if skip(h.excitation) {
                    Ok(None)
                } else {
                    SectorEigen::new(h).map(Some)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let skipped = sectors
            .iter()
            .enumerate()
            .filter_map(|(n, s)| s.is_none().then_some(n))
            .collect();
        Ok(Self {
            space: hamiltonian.space().clone(),
            sectors,
            skipped,
        })
    }

    #[inline]
    pub fn space(&self) -> &Arc<TruncatedSpace> {
        &self.space
    }

    #[inline]
    pub fn truncation(&self) -> usize {
        self.space.truncation()
    }

    /// Sectors that were not diagonalized.
    #[inline]
    pub fn skipped(&self) -> &[usize] {
        &self.skipped
    }

    #[inline]
    pub fn sector(&self, n: usize) -> Option<&SectorEigen<T>> {
        self.sectors[n].as_ref()
    }

    /// `⟨ψ|H|ψ⟩` from the spectral decomposition.
    pub fn energy(&self, state: &PureState<T>) -> Result<T> {
        self.check(state)?;
        let mut e = T::zero();
        for (eig, block) in self.sectors.iter().zip(state.blocks()) {
            if let Some(eig) = eig {
                let coeffs = eig.vectors.ad_mul(block);
                for (c, &en) in coeffs.iter().zip(eig.energies.iter()) {
                    e += c.norm_sqr() * en;
                }
            }
        }
        Ok(e)
    }

    fn check(&self, state: &PureState<T>) -> Result<()> {
        if state.truncation() != self.truncation() {
            return Err(Error::Config(format!(
                "state truncation {} does not match propagator truncation {}",
                state.truncation(),
                self.truncation()
            )));
        }
        Ok(())
    }
}

/// Diagonalizes the full Hamiltonian for `params`.
pub fn build_propagator<T: Real>(params: &SystemParams<T>) -> Result<Propagator<T>> {
    Propagator::new(&Hamiltonian::new(params)?)
}

/// Like [`build_propagator`], but skips sectors where `state` carries less
/// than `threshold` probability.
pub fn build_propagator_for<T: Real>(
    params: &SystemParams<T>,
    state: &PureState<T>,
    threshold: T,
) -> Result<Propagator<T>> {
    let hamiltonian = Hamiltonian::on_space(params, state.space().clone())?;
    let weights = state.sector_weights();
    Propagator::with_skip(&hamiltonian, |n| weights[n] < threshold)
}

/// `e^{-iHt} ψ`, with `t` in units of `1/g`. `t = 0` returns the state unchanged.
pub fn evolve<T: Real>(state: &PureState<T>, prop: &Propagator<T>, t: T) -> Result<PureState<T>> {
    prop.check(state)?;
    if t == T::zero() {
        return Ok(state.clone());
    }
    let blocks = prop
        .sectors
        .par_iter()
        .zip(state.blocks.par_iter())
        .map(|(eig, block)| match eig {
            Some(eig) => eig.apply(block, t),
            None => block.clone(),
        })
        .collect();
    Ok(PureState {
        space: state.space.clone(),
        blocks,
    })
}

/// Populations `|⟨q1 q2|ψ⟩|²` summed over photons, in the order `ee, eg, ge, gg`.
pub fn qubit_populations<T: Real>(state: &PureState<T>) -> [T; 4] {
    let mut p = [T::zero(); 4];
    for (s, a) in state.iter() {
        p[s.qubit_index()] += a.norm_sqr();
    }
    p
}

/// Embeds `|q1 q2⟩ ⊗ Σ U_{l,m}|l⟩|m⟩` into the sector layout; photon numbers
/// above the truncation are dropped.
pub fn embed_product<T: Real>(
    space: Arc<TruncatedSpace>,
    qubits: &QubitState<T>,
    field: &DMatrix<Complex<T>>,
) -> PureState<T> {
    let amps = qubits.amplitudes();
    let mut state = PureState::zeros(space);
    for (n, block) in state.blocks.iter_mut().enumerate() {
        for (i, s) in state.space.sector(n).states().iter().enumerate() {
            if s.n1 < field.nrows() && s.n2 < field.ncols() {
                block[i] = amps[s.qubit_index()] * field[(s.n1, s.n2)];
            }
        }
    }
    state
}
