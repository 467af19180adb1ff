//! Reduced density matrices, Wootters concurrence and von Neumann entropy.

use nalgebra::{Complex, DMatrix, SymmetricEigen, SVD};

use crate::dynamics::PureState;
use crate::error::{Error, Result};
use crate::hilbert::{BasisState, QUBIT_CONFIGS};
use crate::protocols::FieldState;
use crate::scalar::{cabs, creal, czero, Real};

/// Eigenvalues at or below this are treated as zero probability in the entropy.
pub const ENTROPY_CUTOFF: f64 = 1e-12;

/// Tolerance on Hermiticity and trace when validating a density matrix.
pub const DENSITY_TOLERANCE: f64 = 1e-10;

/// A Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    matrix: DMatrix<Complex<T>>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity, unit trace and positivity within [`DENSITY_TOLERANCE`].
    pub fn new(matrix: DMatrix<Complex<T>>) -> Result<Self> {
        let rho = Self { matrix };
        rho.validate()?;
        Ok(rho)
    }

    /// Wraps a matrix without validation.
    pub fn new_unchecked(matrix: DMatrix<Complex<T>>) -> Self {
        Self { matrix }
    }

    /// `|ψ⟩⟨ψ|` for a normalized vector.
    pub fn from_pure(psi: &[Complex<T>]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(psi);
        Self::new(&v * v.adjoint())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    #[inline]
    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn trace(&self) -> Complex<T> {
        self.matrix.trace()
    }

    /// `max |ρ − ρ†|`.
    pub fn hermiticity_error(&self) -> T {
        let m = &self.matrix;
        let n = m.nrows();
        let mut worst = T::zero();
        for r in 0..n {
            for c in r..n {
                worst = worst.max(cabs(m[(r, c)] - m[(c, r)].conj()));
            }
        }
        worst
    }

    /// Eigenvalues in ascending order, tiny negatives clipped to zero.
    pub fn eigenvalues(&self) -> Vec<T> {
        let mut ev: Vec<T> = SymmetricEigen::new(self.hermitian_part())
            .eigenvalues
            .iter()
            .map(|&p| p.max(T::zero()))
            .collect();
        ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        ev
    }

    /// `√ρ`, from the clipped spectral decomposition.
    pub fn sqrt(&self) -> DMatrix<Complex<T>> {
        let eig = SymmetricEigen::new(self.hermitian_part());
        let roots = eig.eigenvalues.map(|p| creal(p.max(T::zero()).sqrt()));
        &eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.adjoint()
    }

    fn hermitian_part(&self) -> DMatrix<Complex<T>> {
        (&self.matrix + self.matrix.adjoint()) * creal(T::lit(0.5))
    }

    fn validate(&self) -> Result<()> {
        let tol = T::tol(DENSITY_TOLERANCE);
        if self.matrix.nrows() != self.matrix.ncols() || self.matrix.nrows() == 0 {
            return Err(Error::Domain(format!(
                "density matrix must be square and non-empty, got {:?}",
                self.matrix.shape()
            )));
        }
        let herm = self.hermiticity_error();
        if herm > tol {
            return Err(Error::Domain(format!("density matrix is not Hermitian (error {herm})")));
        }
        let tr = self.trace();
        if cabs(tr - creal(T::one())) > tol {
            return Err(Error::Domain(format!("density matrix trace {} deviates from 1", tr.re)));
        }
        let min = SymmetricEigen::new(self.hermitian_part())
            .eigenvalues
            .iter()
            .fold(T::zero(), |a, &b| a.min(b));
        if min < -tol {
            return Err(Error::Domain(format!("density matrix has negative eigenvalue {min}")));
        }
        Ok(())
    }
}

/// Two-qubit state `ρ[a,b] = Σ_{n1,n2} ψ(a,n1,n2) ψ*(b,n1,n2)`, basis order `ee, eg, ge, gg`.
///
/// Each amplitude is joined with the amplitudes that share its photon
/// configuration, which may live in a different excitation sector.
pub fn reduce_to_qubits<T: Real>(state: &PureState<T>) -> DensityMatrix<T> {
    let space = state.space();
    let m = space.truncation();
    let mut rho = DMatrix::from_element(4, 4, czero::<T>());
    for (n, sector) in space.sectors().iter().enumerate() {
        let block = state.block(n);
        for (i, s) in sector.states().iter().enumerate() {
            let a = block[i];
            if a.norm_sqr() == T::zero() {
                continue;
            }
            let row = s.qubit_index();
            let photons = s.n1 + s.n2;
            for &(q1, q2) in QUBIT_CONFIGS.iter() {
                let partner = BasisState::new(q1, q2, s.n1, s.n2);
                let pn = photons + partner.qubit_excitation();
                if pn > m {
                    continue;
                }
                let Some(k) = space.sector(pn).position(&partner) else {
                    continue;
                };
                let b = state.block(pn)[k];
                rho[(row, partner.qubit_index())] += a * b.conj();
            }
        }
    }
    DensityMatrix::new_unchecked(rho)
}

/// `σ_y ⊗ σ_y` in the standard two-qubit basis.
fn spin_flip<T: Real>() -> DMatrix<Complex<T>> {
    let mut y = DMatrix::from_element(4, 4, czero::<T>());
    y[(0, 3)] = creal(-T::one());
    y[(1, 2)] = creal(T::one());
    y[(2, 1)] = creal(T::one());
    y[(3, 0)] = creal(-T::one());
    y
}

/// Wootters concurrence `max{0, √λ₁ − √λ₂ − √λ₃ − √λ₄}`, where `λ_i` are the
/// decreasing eigenvalues of `ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
///
/// The `√λ_i` are obtained as the singular values of `√ρ (σ_y⊗σ_y) √ρ*`,
/// which share the spectrum of the product above but keep near-zero roots
/// accurate instead of amplifying roundoff through a square root.
pub fn concurrence<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    if rho.dim() != 4 {
        return Err(Error::Domain(format!(
            "concurrence needs a 4×4 density matrix, got {}×{}",
            rho.dim(),
            rho.dim()
        )));
    }
    rho.validate()?;
    let root = rho.sqrt();
    let a = &root * spin_flip::<T>() * root.map(|z| z.conj());
    let svd = SVD::try_new(a, false, false, T::default_epsilon(), 0).ok_or(Error::Numerical {
        sector: 0,
        message: "SVD of the concurrence matrix did not converge".into(),
    })?;
    let mut s: Vec<T> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    let c = s[0] - s[1] - s[2] - s[3];
    Ok(c.max(T::zero()).min(T::one()))
}

/// `−Tr(ρ log₂ ρ)` in ebits; eigenvalues below [`ENTROPY_CUTOFF`] contribute nothing.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    let cutoff = T::lit(ENTROPY_CUTOFF);
    let ln2 = T::lit(2.0).ln();
    rho.eigenvalues()
        .into_iter()
        .filter(|&p| p > cutoff)
        .fold(T::zero(), |acc, p| acc - p * p.ln() / ln2)
        .max(T::zero())
}

/// `ρ_f1 = Tr_2 |Ψ_f⟩⟨Ψ_f|`, i.e. `ρ[l,l'] = Σ_m U_{l,m} U*_{l',m}`.
pub fn reduce_to_field1<T: Real>(field: &FieldState<T>) -> DensityMatrix<T> {
    let u = field.grid();
    DensityMatrix::new_unchecked(u * u.adjoint())
}
