//! Dense operator matrices on the truncated atom ⊗ Fock space.

use ndarray::{Array1, Array2, Zip};
use num_complex::Complex64 as C64;

use super::basis::{Atom, BasisSpec};
use crate::spectral::ModelParams;

/// A dense complex matrix together with the name of the operator it holds.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub label: String,
    pub data: Array2<C64>,
}

impl OperatorMatrix {
    pub fn new(label: impl Into<String>, data: Array2<C64>) -> Self {
        assert_eq!(data.nrows(), data.ncols(), "operator matrices are square");
        Self { label: label.into(), data }
    }

    pub fn zeros(label: impl Into<String>, dim: usize) -> Self {
        Self::new(label, Array2::zeros((dim, dim)))
    }

    pub fn identity(dim: usize) -> Self {
        Self::new("1", Array2::eye(dim))
    }

    /// Diagonal operator `f(basis index)`.
    pub fn diagonal(label: impl Into<String>, dim: usize, f: impl Fn(usize) -> C64) -> Self {
        let diag: Array1<C64> = (0..dim).map(f).collect();
        Self::new(label, Array2::from_diag(&diag))
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dagger(&self) -> Self {
        let data = self.data.t().mapv(|z| z.conj());
        Self::new(format!("{}†", self.label), data)
    }

    /// Matrix product that skips the zero entries of `self`; the operators
    /// here have at most a few nonzeros per row.
    pub fn matmul(&self, rhs: &Self) -> Self {
        let dim = self.dim();
        assert_eq!(dim, rhs.dim());
        let mut out = Array2::<C64>::zeros((dim, dim));
        for (i, row) in self.data.outer_iter().enumerate() {
            let mut out_row = out.row_mut(i);
            for (k, &aik) in row.iter().enumerate() {
                if aik != C64::new(0.0, 0.0) {
                    out_row.scaled_add(aik, &rhs.data.row(k));
                }
            }
        }
        Self::new(format!("{}·{}", self.label, rhs.label), out)
    }

    pub fn plus(&self, rhs: &Self) -> Self {
        Self::new(format!("({} + {})", self.label, rhs.label), &self.data + &rhs.data)
    }

    pub fn minus(&self, rhs: &Self) -> Self {
        Self::new(format!("({} - {})", self.label, rhs.label), &self.data - &rhs.data)
    }

    pub fn scale(&self, factor: impl Into<C64>) -> Self {
        let factor = factor.into();
        Self::new(self.label.clone(), self.data.mapv(|z| z * factor))
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self.matmul(rhs)
            .minus(&rhs.matmul(self))
            .relabel(format!("[{}, {}]", self.label, rhs.label))
    }

    pub fn anticommutator(&self, rhs: &Self) -> Self {
        self.matmul(rhs)
            .plus(&rhs.matmul(self))
            .relabel(format!("{{{}, {}}}", self.label, rhs.label))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `|self_ij - other_ij|` over entries with `mask(i) && mask(j)`.
    pub fn masked_max_diff(&self, other: &Self, mask: impl Fn(usize) -> bool) -> f64 {
        let mut worst = 0.0f64;
        Zip::indexed(&self.data).and(&other.data).for_each(|(i, j), a, b| {
            if mask(i) && mask(j) {
                worst = worst.max((a - b).norm());
            }
        });
        worst
    }

    /// Largest entrywise deviation from hermiticity.
    pub fn hermiticity_residual(&self) -> f64 {
        self.masked_max_diff(&self.dagger(), |_| true)
    }
}

/// Every operator the oracle needs, built once per basis and model.
#[derive(Clone, Debug)]
pub struct OperatorSet {
    pub basis: BasisSpec,
    pub a: OperatorMatrix,
    pub a_dag: OperatorMatrix,
    pub sigma: OperatorMatrix,
    pub sigma_dag: OperatorMatrix,
    pub sigma3: OperatorMatrix,
    pub n_photon: OperatorMatrix,
    /// Conserved excitation number `a†a + σ†σ`.
    pub n_excitation: OperatorMatrix,
    pub hamiltonian: OperatorMatrix,
    pub b: OperatorMatrix,
    pub b_dag: OperatorMatrix,
    pub tau: OperatorMatrix,
    pub tau_dag: OperatorMatrix,
    pub tau1: OperatorMatrix,
    pub tau2: OperatorMatrix,
    pub tau3: OperatorMatrix,
    /// Polariton action `b b†`.
    pub b_hat: OperatorMatrix,
    pub dark_projector: OperatorMatrix,
}

fn photon_function(basis: &BasisSpec, label: &str, f: impl Fn(f64) -> f64) -> OperatorMatrix {
    OperatorMatrix::diagonal(label, basis.dim(), |i| C64::new(f(basis.state(i).1 as f64), 0.0))
}

pub fn build_operators(basis: BasisSpec, params: &ModelParams) -> OperatorSet {
    let dim = basis.dim();
    let n_max = basis.n_max();
    let hbar = params.hbar;

    let mut a = OperatorMatrix::zeros("a", dim);
    for atom in [Atom::Excited, Atom::Ground] {
        for n in 1..=n_max {
            a.data[[basis.index(atom, n - 1), basis.index(atom, n)]] = C64::new((n as f64).sqrt(), 0.0);
        }
    }
    let a_dag = a.dagger().relabel("a†");

    let mut sigma = OperatorMatrix::zeros("σ", dim);
    for n in 0..=n_max {
        sigma.data[[basis.index(Atom::Ground, n), basis.index(Atom::Excited, n)]] = C64::new(1.0, 0.0);
    }
    let sigma_dag = sigma.dagger().relabel("σ†");
    let upper = sigma_dag.matmul(&sigma);
    let lower = sigma.matmul(&sigma_dag);
    let sigma3 = upper.minus(&lower).relabel("σ3");

    let n_photon = photon_function(&basis, "a†a", |n| n);
    let n_excitation = n_photon.plus(&upper).relabel("n_exc");
    let one = OperatorMatrix::identity(dim);

    // (a†a + aa†)/2 = a†a + 1/2 exactly; the truncated product aa† would
    // corrupt the top Fock level.
    let field = n_photon.plus(&one.scale(0.5)).scale(hbar * params.omega);
    let atom = sigma3.scale(0.5 * hbar * params.nu);
    let coupling = a_dag
        .matmul(&sigma)
        .plus(&a.matmul(&sigma_dag))
        .scale(hbar * params.g);
    let hamiltonian = field.plus(&atom).plus(&coupling).relabel("H");

    // sqrt(a†a) sqrt(aa†)^-1 and (aa†)^-1/2 on number eigenvalues
    let ratio = photon_function(&basis, "sqrt(n/(n+1))", |n| (n / (n + 1.0)).sqrt());
    let inv_root = photon_function(&basis, "(n+1)^-1/2", |n| 1.0 / (n + 1.0).sqrt());

    let b = upper
        .plus(&lower.matmul(&ratio))
        .matmul(&a)
        .scale(hbar.sqrt())
        .relabel("b");
    let b_dag = b.dagger().relabel("b†");
    let tau = sigma.matmul(&a_dag).matmul(&inv_root).relabel("τ");
    let tau_dag = tau.dagger().relabel("τ†");
    let tau1 = tau.plus(&tau_dag).relabel("τ1");
    let tau2 = tau.minus(&tau_dag).scale(C64::i()).relabel("τ2");
    let tau3 = tau_dag.matmul(&tau).minus(&tau.matmul(&tau_dag)).relabel("τ3");
    let b_hat = b.matmul(&b_dag).relabel("B");

    let dark = basis.dark_index();
    let dark_projector = OperatorMatrix::diagonal("|g,0><g,0|", dim, |i| {
        C64::new(if i == dark { 1.0 } else { 0.0 }, 0.0)
    });

    OperatorSet {
        basis,
        a,
        a_dag,
        sigma,
        sigma_dag,
        sigma3,
        n_photon,
        n_excitation,
        hamiltonian,
        b,
        b_dag,
        tau,
        tau_dag,
        tau1,
        tau2,
        tau3,
        b_hat,
        dark_projector,
    }
}
