//! Exact complex linear algebra for labeled multi-mode two-level systems.
//!
//! States and density matrices are dense arrays over an ordered list of
//! named modes, each of dimension two. The leftmost mode label is the most
//! significant bit of the basis index, so a state over `[in, A, I, II]`
//! stores the amplitude of `|i j k l⟩` at index `i·8 + j·4 + k·2 + l`.
//! Systems never exceed four modes here, so everything is dense and exact.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex amplitude type used throughout the crate.
pub type C64 = Complex64;

/// Tolerance for "normalized" checks on states and density matrices.
pub const NORM_TOL: f64 = 1e-12;
/// Hermiticity tolerance for density matrices.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Positive-semidefiniteness tolerance (smallest admissible eigenvalue).
pub const PSD_TOL: f64 = -1e-10;
/// Eigenvalues of the spin-flipped product matrix below this magnitude are
/// treated as exact zeros before taking square roots; without the clamp the
/// square root amplifies O(1e-16) eigen-solver noise to O(1e-8).
const SPECTRUM_CLAMP: f64 = 1e-13;

/// A named two-level mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode(pub &'static str);

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

fn check_unique(modes: &[Mode]) -> Result<()> {
    for (i, m) in modes.iter().enumerate() {
        if modes[i + 1..].contains(m) {
            return Err(Error::DuplicateMode(*m));
        }
    }
    Ok(())
}

/// Maps a sub-index over `positions` into a full basis index over `n_modes`
/// modes. Bit `j` of `bits` (counted from the most significant bit of the
/// sub-index) lands on `positions[j]`.
fn scatter(bits: usize, positions: &[usize], n_modes: usize) -> usize {
    let n = positions.len();
    let mut idx = 0;
    for (j, &p) in positions.iter().enumerate() {
        if (bits >> (n - 1 - j)) & 1 == 1 {
            idx |= 1 << (n_modes - 1 - p);
        }
    }
    idx
}

/// A pure state over an ordered list of modes.
///
/// The amplitudes are stored as-is; `squared_norm` records Σ|aᵢ|² so that
/// selective-measurement probabilities can be read off a deliberately
/// unnormalized state instead of being recomputed.
#[derive(Clone, Debug)]
pub struct StateVector {
    modes: Vec<Mode>,
    amplitudes: DVector<C64>,
    squared_norm: f64,
}

impl StateVector {
    /// Builds a state from explicit amplitudes in mode order.
    pub fn new(modes: Vec<Mode>, amplitudes: Vec<C64>) -> Result<Self> {
        check_unique(&modes)?;
        if amplitudes.len() != 1 << modes.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for {} modes (expected {})",
                amplitudes.len(),
                modes.len(),
                1usize << modes.len()
            )));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("state amplitudes"));
        }
        let amplitudes = DVector::from_vec(amplitudes);
        let squared_norm = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        Ok(Self { modes, amplitudes, squared_norm })
    }

    /// Computational basis state `|bit⟩` of a single mode.
    pub fn basis(mode: Mode, bit: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); 2];
        amps[bit & 1] = C64::new(1.0, 0.0);
        Self::new(vec![mode], amps).expect("basis state is always valid")
    }

    /// Single-mode state `a0|0⟩ + a1|1⟩`.
    pub fn qubit(mode: Mode, a0: C64, a1: C64) -> Result<Self> {
        Self::new(vec![mode], vec![a0, a1])
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn num_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.amplitudes.as_slice()
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    /// Recorded squared norm Σ|aᵢ|².
    pub fn squared_norm(&self) -> f64 {
        self.squared_norm
    }

    pub fn is_normalized(&self) -> bool {
        (self.squared_norm - 1.0).abs() <= NORM_TOL
    }

    /// Rescales to unit norm.
    pub fn normalize(&self) -> Result<Self> {
        if self.squared_norm <= 0.0 {
            return Err(Error::ZeroWeight(self.squared_norm));
        }
        let scale = C64::new(1.0 / self.squared_norm.sqrt(), 0.0);
        let amplitudes = &self.amplitudes * scale;
        let squared_norm = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        Ok(Self { modes: self.modes.clone(), amplitudes, squared_norm })
    }

    fn position(&self, mode: Mode) -> Result<usize> {
        self.modes
            .iter()
            .position(|&m| m == mode)
            .ok_or(Error::UnknownMode(mode))
    }
}

/// Kronecker product of two states, modes of `a` before modes of `b`.
/// The recorded squared norms multiply.
pub fn tensor_product(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let mut modes = a.modes.clone();
    modes.extend_from_slice(&b.modes);
    check_unique(&modes)?;
    let amplitudes = a.amplitudes.kronecker(&b.amplitudes);
    Ok(StateVector {
        modes,
        amplitudes: DVector::from_column_slice(amplitudes.as_slice()),
        squared_norm: a.squared_norm * b.squared_norm,
    })
}

/// Applies a linear map taking the `targets` modes to the `outputs` modes,
/// acting as the identity on every other mode. The operator must have
/// `2^outputs.len()` rows and `2^targets.len()` columns; rectangular shapes
/// replace modes (an isometry from one mode to two, or a bra contraction to
/// none). The replacement modes are spliced in at the position of the first
/// target. The result carries its new squared norm and is left unnormalized.
pub fn apply_map(
    op: &DMatrix<C64>,
    targets: &[Mode],
    outputs: &[Mode],
    s: &StateVector,
) -> Result<StateVector> {
    let nt = targets.len();
    let no = outputs.len();
    if nt == 0 {
        return Err(Error::DimensionMismatch("no target modes given".into()));
    }
    check_unique(targets)?;
    if op.ncols() != 1 << nt || op.nrows() != 1 << no {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator on {} target / {} output modes (expected {}x{})",
            op.nrows(),
            op.ncols(),
            nt,
            no,
            1usize << no,
            1usize << nt
        )));
    }

    let tpos: Vec<usize> = targets
        .iter()
        .map(|&m| s.position(m))
        .collect::<Result<_>>()?;
    let insert_at = *tpos.iter().min().expect("at least one target");

    // New mode list: targets removed, outputs spliced in at the first target.
    let n_in = s.modes.len();
    let mut new_modes: Vec<Mode> = Vec::with_capacity(n_in - nt + no);
    let mut cpos_in = Vec::new();
    let mut cpos_out = Vec::new();
    let mut opos = Vec::new();
    for i in 0..n_in {
        if i == insert_at {
            for &m in outputs {
                opos.push(new_modes.len());
                new_modes.push(m);
            }
        }
        if !tpos.contains(&i) {
            cpos_in.push(i);
            cpos_out.push(new_modes.len());
            new_modes.push(s.modes[i]);
        }
    }
    check_unique(&new_modes)?;

    let n_out = new_modes.len();
    let nc = cpos_in.len();
    let mut amplitudes = DVector::from_element(1 << n_out, C64::new(0.0, 0.0));
    for c in 0..1usize << nc {
        let base_in = scatter(c, &cpos_in, n_in);
        let base_out = scatter(c, &cpos_out, n_out);
        for ob in 0..1usize << no {
            let mut acc = C64::new(0.0, 0.0);
            for ib in 0..1usize << nt {
                acc += op[(ob, ib)] * s.amplitudes[base_in | scatter(ib, &tpos, n_in)];
            }
            amplitudes[base_out | scatter(ob, &opos, n_out)] = acc;
        }
    }
    let squared_norm = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    Ok(StateVector { modes: new_modes, amplitudes, squared_norm })
}

/// Applies a square operator on the listed modes, identity elsewhere.
pub fn apply_local(op: &DMatrix<C64>, targets: &[Mode], s: &StateVector) -> Result<StateVector> {
    if op.nrows() != op.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator is not square",
            op.nrows(),
            op.ncols()
        )));
    }
    apply_map(op, targets, targets, s)
}

/// A density matrix over an ordered list of modes.
///
/// `trace_weight` records the trace before any normalization, following the
/// same bookkeeping convention as [`StateVector::squared_norm`].
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    modes: Vec<Mode>,
    entries: DMatrix<C64>,
    trace_weight: f64,
}

impl DensityMatrix {
    /// Builds a density matrix from explicit entries, validating Hermiticity
    /// and positive semidefiniteness.
    pub fn new(modes: Vec<Mode>, entries: DMatrix<C64>) -> Result<Self> {
        check_unique(&modes)?;
        let dim = 1usize << modes.len();
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} entries for {} modes (expected {dim}x{dim})",
                entries.nrows(),
                entries.ncols(),
                modes.len()
            )));
        }
        if entries.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("density-matrix entries"));
        }
        let mut asym: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                asym = asym.max((entries[(i, j)] - entries[(j, i)].conj()).norm());
            }
        }
        if asym > HERMITICITY_TOL {
            return Err(Error::NotHermitian(asym));
        }
        let min_eig = entries
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < PSD_TOL {
            return Err(Error::NotPositive(min_eig));
        }
        let trace_weight = (0..dim).map(|i| entries[(i, i)].re).sum();
        Ok(Self { modes, entries, trace_weight })
    }

    /// Projector `|ψ⟩⟨ψ|`. The trace weight is the state's squared norm.
    pub fn from_pure(psi: &StateVector) -> Self {
        let entries = &psi.amplitudes * psi.amplitudes.adjoint();
        Self {
            modes: psi.modes.clone(),
            entries,
            trace_weight: psi.squared_norm,
        }
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    pub fn dim(&self) -> usize {
        1 << self.modes.len()
    }

    /// Recorded trace before normalization.
    pub fn trace_weight(&self) -> f64 {
        self.trace_weight
    }

    pub fn is_normalized(&self) -> bool {
        (self.trace_weight - 1.0).abs() <= NORM_TOL
    }

    /// Rescales to unit trace.
    pub fn normalize(&self) -> Result<Self> {
        if self.trace_weight <= 0.0 {
            return Err(Error::ZeroWeight(self.trace_weight));
        }
        Ok(Self {
            modes: self.modes.clone(),
            entries: self.entries.map(|a| a / self.trace_weight),
            trace_weight: 1.0,
        })
    }

    fn position(&self, mode: Mode) -> Result<usize> {
        self.modes
            .iter()
            .position(|&m| m == mode)
            .ok_or(Error::UnknownMode(mode))
    }
}

/// Traces out every mode not listed in `keep`. The output modes follow the
/// order of `keep`, and `trace_weight` is carried over unchanged.
pub fn partial_trace(rho: &DensityMatrix, keep: &[Mode]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    check_unique(keep)?;
    let kpos: Vec<usize> = keep
        .iter()
        .map(|&m| rho.position(m))
        .collect::<Result<_>>()?;
    let n = rho.modes.len();
    let cpos: Vec<usize> = (0..n).filter(|i| !kpos.contains(i)).collect();
    let nk = kpos.len();
    let nc = cpos.len();

    let mut entries = DMatrix::from_element(1 << nk, 1 << nk, C64::new(0.0, 0.0));
    for a in 0..1usize << nk {
        let ia = scatter(a, &kpos, n);
        for b in 0..1usize << nk {
            let ib = scatter(b, &kpos, n);
            let mut acc = C64::new(0.0, 0.0);
            for c in 0..1usize << nc {
                let ic = scatter(c, &cpos, n);
                acc += rho.entries[(ia | ic, ib | ic)];
            }
            entries[(a, b)] = acc;
        }
    }
    Ok(DensityMatrix {
        modes: keep.to_vec(),
        entries,
        trace_weight: rho.trace_weight,
    })
}

/// Overlap `⟨ψ|ρ|ψ⟩` of a normalized pure state with a normalized density
/// matrix over the same modes.
pub fn fidelity_pure(psi: &StateVector, rho: &DensityMatrix) -> Result<f64> {
    if psi.modes != rho.modes {
        return Err(Error::DimensionMismatch(format!(
            "state modes {:?} do not match density-matrix modes {:?}",
            psi.modes, rho.modes
        )));
    }
    if !psi.is_normalized() {
        return Err(Error::NotNormalized(psi.squared_norm));
    }
    if !rho.is_normalized() {
        return Err(Error::NotNormalized(rho.trace_weight));
    }
    let v = (&rho.entries * &psi.amplitudes).dotc(&psi.amplitudes);
    Ok(v.re.max(0.0))
}

fn pauli_y() -> DMatrix<C64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
        ],
    )
}

/// Two-qubit concurrence of a normalized density matrix.
///
/// Computes the eigenvalues of `ρ (Y⊗Y) ρ* (Y⊗Y)` with a general complex
/// eigensolver, clamps eigenvalues indistinguishable from zero, and returns
/// `max(0, λ₁ − λ₂ − λ₃ − λ₄)` with the λᵢ the descending square roots.
pub fn concurrence_wootters(rho: &DensityMatrix) -> Result<f64> {
    if rho.modes.len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "concurrence requires two modes, got {}",
            rho.modes.len()
        )));
    }
    if !rho.is_normalized() {
        return Err(Error::NotNormalized(rho.trace_weight));
    }
    let min_eig = rho
        .entries
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min_eig < PSD_TOL {
        return Err(Error::NotPositive(min_eig));
    }

    let yy = pauli_y().kronecker(&pauli_y());
    let flipped = &yy * rho.entries.map(|a| a.conj()) * &yy;
    let product = &rho.entries * flipped;
    // A fully collapsed pair leaves an exactly zero product, on which the
    // QR iteration cannot deflate; its spectrum is zero outright.
    let max_entry = product.iter().map(|e| e.norm()).fold(0.0f64, f64::max);
    if max_entry <= SPECTRUM_CLAMP {
        return Ok(0.0);
    }
    let schur = nalgebra::linalg::Schur::try_new(product, f64::EPSILON, 10_000)
        .ok_or(Error::EigenFailure)?;
    let eigenvalues = schur.eigenvalues().ok_or(Error::EigenFailure)?;
    let mut lambdas: Vec<f64> = eigenvalues
        .iter()
        .map(|ev| {
            if ev.re.abs() < SPECTRUM_CLAMP {
                0.0
            } else {
                ev.re.max(0.0).sqrt()
            }
        })
        .collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}
