//! Entanglement reciprocation between a qubit pair and the two resonator fields.
//!
//! 1. A Bell pair `(|e₁g₂⟩ + |g₁e₂⟩)/√2` interacts with `|α⟩|α⟩` for time `t`.
//! 2. The fields are postselected on both qubits leaving in `|g⟩`, with
//!    probability `P`; the field-field entanglement is the entropy `ε` of field 1.
//! 3. A fresh pair in `|g₁g₂⟩` interacts with the postselected fields for `t′`
//!    and its concurrence `C_retrieved` is read out.
//! 4. Optionally the fields are projected onto `⟨α|⟨α|`, leaving a pure qubit
//!    state with concurrence `C_projected` and success probability `P_projection`.

use std::sync::Arc;

use nalgebra::{Complex, DMatrix};
use rayon::prelude::*;

use crate::dynamics::{build_propagator, embed_product, evolve, prepare_initial_on, Propagator, PureState, QubitState};
use crate::entanglement::{concurrence, reduce_to_field1, reduce_to_qubits, von_neumann_entropy, DensityMatrix};
use crate::error::{Error, Result};
use crate::hilbert::CoherentTable;
use crate::model::SystemParams;
use crate::scalar::{creal, czero, Real};

/// Probabilities below this make postselection or projection fail.
pub const MIN_PROBABILITY: f64 = 1e-12;

/// Normalized two-mode field state `N_f Σ U_{l,m} |l⟩|m⟩`.
#[derive(Debug, Clone)]
pub struct FieldState<T: Real> {
    grid: DMatrix<Complex<T>>,
    norm_constant: T,
}

impl<T: Real> FieldState<T> {
    /// Normalizes `grid` (rows index mode 1, columns mode 2).
    pub fn new(grid: DMatrix<Complex<T>>) -> Result<Self> {
        let mass = grid.norm_squared();
        if !(mass > T::zero()) {
            return Err(Error::Domain("field amplitudes vanish".into()));
        }
        let norm_constant = T::one() / mass.sqrt();
        Ok(Self {
            grid: grid * creal(norm_constant),
            norm_constant,
        })
    }

    #[inline]
    pub fn grid(&self) -> &DMatrix<Complex<T>> {
        &self.grid
    }

    /// The factor `N_f` that was applied.
    #[inline]
    pub fn norm_constant(&self) -> T {
        self.norm_constant
    }

    /// Largest photon number kept per mode.
    #[inline]
    pub fn truncation(&self) -> usize {
        self.grid.nrows() - 1
    }
}

/// Conditions the fields on both qubits being found in `|g⟩`.
///
/// Returns the normalized field state and the success probability `P`.
pub fn postselect_gg<T: Real>(state: &PureState<T>) -> Result<(FieldState<T>, T)> {
    let m = state.truncation();
    let mut grid = DMatrix::from_element(m + 1, m + 1, czero::<T>());
    let mut p = T::zero();
    for (s, a) in state.iter() {
        if s.q1 == 0 && s.q2 == 0 {
            grid[(s.n1, s.n2)] = a;
            p += a.norm_sqr();
        }
    }
    if p < T::lit(MIN_PROBABILITY) {
        return Err(Error::PostselectionImpossible { probability: p.as_f64() });
    }
    Ok((FieldState::new(grid)?, p))
}

/// Sends a fresh `|g₁g₂⟩` pair through fields `field` for time `t_prime`.
///
/// Returns the reduced two-qubit state and the joint qubit-field state.
pub fn second_pair_evolution<T: Real>(
    field: &FieldState<T>,
    prop: &Propagator<T>,
    t_prime: T,
) -> Result<(DensityMatrix<T>, PureState<T>)> {
    let m = prop.truncation();
    if field.truncation() != m {
        return Err(Error::Config(format!(
            "field truncation {} does not match propagator truncation {m}",
            field.truncation()
        )));
    }
    let joint = embed_product(prop.space().clone(), &QubitState::Gg, field.grid());
    let joint = evolve(&joint, prop, t_prime)?;
    Ok((reduce_to_qubits(&joint), joint))
}

/// Projects both fields onto the truncated, renormalized coherent state `|α⟩`.
///
/// Returns the normalized qubit amplitudes (`ee, eg, ge, gg`) and the success
/// probability.
pub fn project_coherent<T: Real>(joint: &PureState<T>, alpha: T) -> Result<([Complex<T>; 4], T)> {
    let bra = CoherentTable::new(alpha, joint.truncation())?.normalized();
    let mut amps = [czero::<T>(); 4];
    for (s, a) in joint.iter() {
        amps[s.qubit_index()] += a * (bra[s.n1] * bra[s.n2]);
    }
    let p = amps.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr());
    if p < T::lit(MIN_PROBABILITY) {
        return Err(Error::ProjectionImpossible { probability: p.as_f64() });
    }
    let scale = creal(T::one() / p.sqrt());
    for a in &mut amps {
        *a *= scale;
    }
    Ok((amps, p))
}

/// One time point of a reciprocation run. `None` marks a quantity that is
/// undefined because a preceding postselection or projection failed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolRecord<T> {
    /// Interaction time of the first pair, in units of `1/g`.
    pub t: T,
    /// Interaction time of the second pair, in units of `1/g`.
    pub t_prime: Option<T>,
    /// Probability of finding both first-pair qubits in `|g⟩`.
    pub p: T,
    /// Entropy of field 1 after postselection, in ebits.
    pub epsilon: Option<T>,
    pub c_retrieved: Option<T>,
    pub c_projected: Option<T>,
    pub p_projection: Option<T>,
    /// `|‖ψ(t)‖ − 1|` of the first-stage state.
    pub norm_error: T,
}

impl<T: Real> ProtocolRecord<T> {
    fn forward_only(t: T, p: T, epsilon: Option<T>, norm_error: T) -> Self {
        Self {
            t,
            t_prime: None,
            p,
            epsilon,
            c_retrieved: None,
            c_projected: None,
            p_projection: None,
            norm_error,
        }
    }
}

/// Shared state for evaluating the protocol at many time points.
#[derive(Debug, Clone)]
pub struct Reciprocation<T: Real> {
    params: SystemParams<T>,
    propagator: Propagator<T>,
    initial: PureState<T>,
}

impl<T: Real> Reciprocation<T> {
    pub fn new(params: &SystemParams<T>) -> Result<Self> {
        let propagator = build_propagator(params)?;
        Self::with_propagator(params, propagator)
    }

    pub fn with_propagator(params: &SystemParams<T>, propagator: Propagator<T>) -> Result<Self> {
        let space = Arc::clone(propagator.space());
        let initial = prepare_initial_on(space, &QubitState::BellPlus, params.alpha)?;
        Ok(Self {
            params: *params,
            propagator,
            initial,
        })
    }

    #[inline]
    pub fn params(&self) -> &SystemParams<T> {
        &self.params
    }

    #[inline]
    pub fn propagator(&self) -> &Propagator<T> {
        &self.propagator
    }

    #[inline]
    pub fn initial(&self) -> &PureState<T> {
        &self.initial
    }

    /// First-stage state at `t` and the postselection outcome.
    fn first_stage(&self, t: T) -> Result<(T, T, Option<FieldState<T>>)> {
        let state = evolve(&self.initial, &self.propagator, t)?;
        let norm_error = (state.norm() - T::one()).abs();
        match postselect_gg(&state) {
            Ok((field, p)) => Ok((norm_error, p, Some(field))),
            Err(Error::PostselectionImpossible { probability }) => {
                Ok((norm_error, T::lit(probability), None))
            }
            Err(e) => Err(e),
        }
    }

    /// `P` and `ε` at time `t`.
    pub fn forward_at(&self, t: T) -> Result<ProtocolRecord<T>> {
        let (norm_error, p, field) = self.first_stage(t)?;
        let epsilon = field.map(|f| von_neumann_entropy(&reduce_to_field1(&f)));
        Ok(ProtocolRecord::forward_only(t, p, epsilon, norm_error))
    }

    /// The whole pipeline with first-pair time `t` and second-pair time `t_prime`.
    pub fn full_at(&self, t: T, t_prime: T) -> Result<ProtocolRecord<T>> {
        let (norm_error, p, field) = self.first_stage(t)?;
        let mut record = ProtocolRecord::forward_only(t, p, None, norm_error);
        record.t_prime = Some(t_prime);
        let Some(field) = field else {
            return Ok(record);
        };
        record.epsilon = Some(von_neumann_entropy(&reduce_to_field1(&field)));
        let (rho, joint) = second_pair_evolution(&field, &self.propagator, t_prime)?;
        record.c_retrieved = Some(concurrence(&rho)?);
        match project_coherent(&joint, self.params.alpha) {
            Ok((amps, p_proj)) => {
                record.c_projected = Some(concurrence(&DensityMatrix::from_pure(&amps)?)?);
                record.p_projection = Some(p_proj);
            }
            Err(Error::ProjectionImpossible { probability }) => {
                record.p_projection = Some(T::lit(probability));
            }
            Err(e) => return Err(e),
        }
        Ok(record)
    }
}

/// `P` and `ε` over a grid of first-pair times (units of `1/g`).
pub fn reciprocation_forward<T: Real>(params: &SystemParams<T>, t_grid: &[T]) -> Result<Vec<ProtocolRecord<T>>> {
    let protocol = Reciprocation::new(params)?;
    t_grid.par_iter().map(|&t| protocol.forward_at(t)).collect()
}

/// The full pipeline. With `t_prime_grid = None` the second pair interacts for
/// the same time as the first (`t′ = t`); otherwise every `(t, t′)` pair of the
/// two grids is evaluated, `t′` varying fastest.
pub fn reciprocation_full<T: Real>(
    params: &SystemParams<T>,
    t_grid: &[T],
    t_prime_grid: Option<&[T]>,
) -> Result<Vec<ProtocolRecord<T>>> {
    let protocol = Reciprocation::new(params)?;
    let pairs: Vec<(T, T)> = match t_prime_grid {
        None => t_grid.iter().map(|&t| (t, t)).collect(),
        Some(tp) => t_grid
            .iter()
            .flat_map(|&t| tp.iter().map(move |&s| (t, s)))
            .collect(),
    };
    pairs
        .par_iter()
        .map(|&(t, s)| protocol.full_at(t, s))
        .collect()
}
