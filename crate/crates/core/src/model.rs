//! Interaction Hamiltonian of two qubits in two coupled resonators, and the
//! dispersive effective model used as an analytic cross-check.
//!
//! In the frame rotating at the field frequency,
//!
//! ```text
//! H = Σ_i [ Δ a_i†a_i + g (S_i⁺ a_i + S_i⁻ a_i†) ] + J (a_1†a_2 + a_1 a_2†)
//! ```
//!
//! Every term conserves the total excitation, so the matrix is assembled one
//! sector at a time.

use std::sync::Arc;

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::hilbert::{truncation_bound, BasisState, SectorBasis, TruncatedSpace};
use crate::scalar::{creal, czero, Real};

/// Physical parameters. Rates are in units where `g` is the natural scale
/// (`g = 1` unless set otherwise); times are in units of `1/g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T> {
    pub g: T,
    pub delta: T,
    pub j: T,
    pub alpha: T,
    truncation: usize,
}

impl<T: Real> SystemParams<T> {
    /// Parameters with `g = 1` and the default truncation `ceil(10 + 2α²)`.
    pub fn new(delta: T, j: T, alpha: T) -> Result<Self> {
        let truncation = truncation_bound(alpha)?;
        let params = Self {
            g: T::one(),
            delta,
            j,
            alpha,
            truncation,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_coupling(mut self, g: T) -> Result<Self> {
        self.g = g;
        self.validate()?;
        Ok(self)
    }

    /// Raises the truncation to at least `m`; never lowers it below the default rule.
    pub fn with_min_truncation(mut self, m: usize) -> Self {
        self.truncation = self.truncation.max(m);
        self
    }

    /// Sets the truncation explicitly, even below the default rule.
    pub fn with_truncation(mut self, m: usize) -> Self {
        self.truncation = m;
        self
    }

    #[inline]
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Mean photon number per mode, `α²`.
    #[inline]
    pub fn mean_photons(&self) -> T {
        self.alpha * self.alpha
    }

    fn validate(&self) -> Result<()> {
        if !(self.g > T::zero()) {
            return Err(Error::Domain(format!("coupling g must be positive, got {}", self.g)));
        }
        if !(self.alpha >= T::zero()) {
            return Err(Error::Domain(format!(
                "coherent amplitude must be non-negative, got {}",
                self.alpha
            )));
        }
        if !(self.delta.is_finite() && self.j.is_finite()) {
            return Err(Error::Domain("detuning and hopping must be finite".into()));
        }
        Ok(())
    }
}

/// Dense Hermitian block of the Hamiltonian on one excitation sector.
#[derive(Debug, Clone)]
pub struct SectorHamiltonian<T: Real> {
    pub excitation: usize,
    pub matrix: DMatrix<Complex<T>>,
}

impl<T: Real> SectorHamiltonian<T> {
    /// `max |H − H†|`.
    pub fn hermiticity_error(&self) -> T {
        let h = &self.matrix;
        let adj = h.adjoint();
        (h - adj)
            .iter()
            .fold(T::zero(), |acc, z| acc.max(z.norm_sqr().sqrt()))
    }
}

/// Assembles the Hamiltonian block for `basis`.
pub fn build_sector_hamiltonian<T: Real>(
    params: &SystemParams<T>,
    basis: &SectorBasis,
) -> Result<SectorHamiltonian<T>> {
    if basis.excitation() > params.truncation() {
        return Err(Error::Config(format!(
            "sector N={} lies above the truncation M={}",
            basis.excitation(),
            params.truncation()
        )));
    }
    let dim = basis.dim();
    let mut h = DMatrix::from_element(dim, dim, czero::<T>());
    let sqrt = |k: usize| T::from_usize_lossy(k).sqrt();

    // Each off-diagonal coupling is added once from the higher-photon side
    // (or from n1 > 0 for hopping) together with its conjugate.
    let couple = |h: &mut DMatrix<Complex<T>>, from: usize, to: &BasisState, amp: T| {
        let k = basis
            .position(to)
            .expect("excitation-conserving term stays in sector");
        h[(from, k)] += creal(amp);
        h[(k, from)] += creal(amp);
    };

    for (i, s) in basis.states().iter().enumerate() {
        h[(i, i)] += creal(params.delta * T::from_usize_lossy(s.n1 + s.n2));

        // g S⁺_1 a_1: |g, n1+1⟩ → √(n1+1) |e, n1⟩
        if s.q1 == 1 {
            let t = BasisState::new(0, s.q2, s.n1 + 1, s.n2);
            couple(&mut h, i, &t, params.g * sqrt(s.n1 + 1));
        }
        if s.q2 == 1 {
            let t = BasisState::new(s.q1, 0, s.n1, s.n2 + 1);
            couple(&mut h, i, &t, params.g * sqrt(s.n2 + 1));
        }
        // J a_1 a_2†: |n1, n2⟩ → √(n1 (n2+1)) |n1−1, n2+1⟩
        if s.n1 > 0 {
            let t = BasisState::new(s.q1, s.q2, s.n1 - 1, s.n2 + 1);
            couple(&mut h, i, &t, params.j * sqrt(s.n1 * (s.n2 + 1)));
        }
    }

    Ok(SectorHamiltonian {
        excitation: basis.excitation(),
        matrix: h,
    })
}

/// The Hamiltonian on every sector of a truncated space.
#[derive(Debug, Clone)]
pub struct Hamiltonian<T: Real> {
    space: Arc<TruncatedSpace>,
    params: SystemParams<T>,
    sectors: Vec<SectorHamiltonian<T>>,
}

impl<T: Real> Hamiltonian<T> {
    pub fn new(params: &SystemParams<T>) -> Result<Self> {
        Self::on_space(params, Arc::new(TruncatedSpace::new(params.truncation())))
    }

    pub fn on_space(params: &SystemParams<T>, space: Arc<TruncatedSpace>) -> Result<Self> {
        if space.truncation() != params.truncation() {
            return Err(Error::Config(format!(
                "space truncation {} does not match parameter truncation {}",
                space.truncation(),
                params.truncation()
            )));
        }
        let sectors = space
            .sectors()
            .iter()
            .map(|b| build_sector_hamiltonian(params, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            space,
            params: *params,
            sectors,
        })
    }

    #[inline]
    pub fn space(&self) -> &Arc<TruncatedSpace> {
        &self.space
    }

    #[inline]
    pub fn params(&self) -> &SystemParams<T> {
        &self.params
    }

    #[inline]
    pub fn sectors(&self) -> &[SectorHamiltonian<T>] {
        &self.sectors
    }

    #[inline]
    pub fn sector(&self, n: usize) -> &SectorHamiltonian<T> {
        &self.sectors[n]
    }
}

/// Default multiple of `√(n̄+1) g/√2` that both shifted detunings must exceed.
pub const DEFAULT_VALIDITY_FACTOR: f64 = 3.0;

/// Dispersive description in terms of the delocalized modes `(a_1 ± a_2)/√2`.
///
/// `delta1p = Δ + J`, `delta2p = Δ − J` and the virtual-photon exchange rate
/// between the qubits is `λ = g²/(2Δ′₁) − g²/(2Δ′₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveModel<T> {
    pub delta1p: T,
    pub delta2p: T,
    pub lambda: T,
    /// `min(|Δ′₁|, |Δ′₂|) / (√(n̄+1) g/√2)`
    pub validity_ratio: T,
}

impl<T: Real> EffectiveModel<T> {
    /// Builds the model without checking the large-detuning condition.
    /// Fails only at the poles `Δ = ±J`.
    pub fn new_unchecked(params: &SystemParams<T>) -> Result<Self> {
        let delta1p = params.delta + params.j;
        let delta2p = params.delta - params.j;
        if delta1p == T::zero() || delta2p == T::zero() {
            return Err(Error::DispersiveRegime {
                ratio: 0.0,
                threshold: DEFAULT_VALIDITY_FACTOR,
            });
        }
        let g2 = params.g * params.g;
        let two = T::lit(2.0);
        let lambda = g2 / (two * delta1p) - g2 / (two * delta2p);
        let scale = (params.mean_photons() + T::one()).sqrt() * params.g / two.sqrt();
        let validity_ratio = delta1p.abs().min(delta2p.abs()) / scale;
        Ok(Self {
            delta1p,
            delta2p,
            lambda,
            validity_ratio,
        })
    }

    /// Whether both shifted detunings exceed `factor · √(n̄+1) g/√2`.
    pub fn is_valid(&self, factor: T) -> bool {
        self.validity_ratio > factor
    }
}

/// Dispersive model, rejected unless the validity ratio exceeds `factor`.
pub fn effective_model<T: Real>(params: &SystemParams<T>, factor: T) -> Result<EffectiveModel<T>> {
    let model = EffectiveModel::new_unchecked(params).map_err(|_| Error::DispersiveRegime {
        ratio: 0.0,
        threshold: factor.as_f64(),
    })?;
    if !model.is_valid(factor) {
        return Err(Error::DispersiveRegime {
            ratio: model.validity_ratio.as_f64(),
            threshold: factor.as_f64(),
        });
    }
    Ok(model)
}

/// Concurrence `|sin 2λt|` of the dispersive closed-form evolution of `|e₁g₂⟩`.
pub fn effective_eg_concurrence<T: Real>(model: &EffectiveModel<T>, t: T) -> T {
    (T::lit(2.0) * model.lambda * t).sin().abs()
}
