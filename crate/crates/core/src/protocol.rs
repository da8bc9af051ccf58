//! The teleportation pipeline through the Hawking channel.
//!
//! Alice holds an arbitrary qubit `α|0⟩ + β|1⟩` and shares the pair
//! `(|00⟩ + |11⟩)/√2` with Bob. Before Bob falls toward the horizon a
//! pre-weak measurement of strength p partially collapses his half toward
//! `|1⟩`, which the thermal channel leaves alone; near the horizon his mode
//! splits into the exterior/interior regions, a post-weak measurement of
//! strength q acts on the exterior, and a Bell measurement with classical
//! corrections completes the transfer. Keeping both weak-measurement
//! branches succeeds with probability N/2 where
//! `N = p̄ζ² + q̄ + p̄q̄η²` is the surviving squared norm.
//!
//! [`simulate_circuit`] runs the whole sequence as a brute-force state-vector
//! circuit; the closed-form evaluators ([`closed_form_output`],
//! [`fidelity_closed`], [`average_fidelity`], [`reduced_state_ai`],
//! [`concurrence_closed`]) must agree with it, and do so within 1e-12 over
//! the full parameter space. Two choices of optimal post-measurement
//! strength are provided: [`q_type1`] matches the surviving branch to the
//! input state, [`q_type2`] maximizes the average fidelity outright, and
//! [`optimize_q_numeric`] is the independent numerical check on the latter.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::horizon::{self, HawkingMode, REGION_I};
use crate::numeric;
use crate::qla::{self, DensityMatrix, Mode, StateVector, C64};
use crate::weakmeas::{self, MeasurementStrength};

/// Mode holding the state to be teleported.
pub const MODE_IN: Mode = Mode("in");
/// Alice's half of the shared pair.
pub const MODE_A: Mode = Mode("A");
/// Bob's half of the shared pair, before it crosses into Kruskal modes.
pub const MODE_B: Mode = Mode("B");

/// Branch weights below this are reported against a maximally mixed
/// conditional state, since the conditional is undefined at zero weight.
const ZERO_BRANCH_TOL: f64 = 1e-14;

/// The qubit to teleport: `cos(θ/2)|0⟩ + sin(θ/2)e^{iδ}|1⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InputState {
    theta: f64,
    delta: f64,
}

impl InputState {
    /// `theta` in [0, π] and `delta` in [0, 2π); any finite values are
    /// accepted since the amplitudes stay normalized regardless.
    pub fn new(theta: f64, delta: f64) -> Result<Self> {
        if !theta.is_finite() || !delta.is_finite() {
            return Err(Error::NonFinite("input-state angles"));
        }
        Ok(Self { theta, delta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Real amplitude of |0⟩.
    pub fn alpha(&self) -> f64 {
        (self.theta / 2.0).cos()
    }

    /// Complex amplitude of |1⟩.
    pub fn beta(&self) -> C64 {
        C64::from_polar((self.theta / 2.0).sin(), self.delta)
    }

    pub fn ket(&self, mode: Mode) -> StateVector {
        StateVector::qubit(mode, C64::new(self.alpha(), 0.0), self.beta())
            .expect("finite angles give finite amplitudes")
    }
}

/// How the post-measurement strength is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QPolicy {
    /// Fixed strength q in [0, 1].
    Manual(f64),
    /// Branch-matching optimum q̄ = p̄ζ².
    Type1,
    /// Average-fidelity-maximizing optimum q̄ = p̄ζ²(√(r⁴+r²+1) − r²)²/(1+r²)²
    /// with r = √p̄·η.
    Type2,
}

/// A full protocol configuration: pre-strength, post-strength policy, and
/// the Hawking channel.
#[derive(Clone, Copy, Debug)]
pub struct ProtocolConfig {
    p: MeasurementStrength,
    q_policy: QPolicy,
    mode: HawkingMode,
}

impl ProtocolConfig {
    /// The optimal policies require p < 1: at p = 1 they drive the kept
    /// branch's weight to zero.
    pub fn new(p: f64, q_policy: QPolicy, mode: HawkingMode) -> Result<Self> {
        let p = MeasurementStrength::new(p)?;
        match q_policy {
            QPolicy::Manual(q) => {
                MeasurementStrength::new(q)?;
            }
            QPolicy::Type1 | QPolicy::Type2 => {
                if p.value() >= 1.0 {
                    return Err(Error::DegenerateProtocol(
                        "p = 1 with an optimal post-measurement policy",
                    ));
                }
            }
        }
        Ok(Self { p, q_policy, mode })
    }

    pub fn p(&self) -> MeasurementStrength {
        self.p
    }

    pub fn q_policy(&self) -> QPolicy {
        self.q_policy
    }

    pub fn mode(&self) -> &HawkingMode {
        &self.mode
    }

    /// The complement q̄ = 1 − q of the policy-resolved post-strength.
    /// The optimal policies are evaluated directly in q̄ to avoid the
    /// 1 − (1 − x) round trip.
    pub fn resolved_q_bar(&self) -> f64 {
        match self.q_policy {
            QPolicy::Manual(q) => 1.0 - q,
            QPolicy::Type1 => q_bar_type1(self.p.complement(), &self.mode),
            QPolicy::Type2 => q_bar_type2(self.p.complement(), &self.mode),
        }
    }

    /// The policy-resolved post-strength q.
    pub fn resolved_q(&self) -> f64 {
        match self.q_policy {
            QPolicy::Manual(q) => q,
            _ => 1.0 - self.resolved_q_bar(),
        }
    }

    /// Surviving squared norm N = p̄ζ² + q̄ + p̄q̄η².
    pub fn n_factor(&self) -> f64 {
        n_factor(self.p.complement(), self.resolved_q_bar(), &self.mode)
    }
}

fn n_factor(p_bar: f64, q_bar: f64, mode: &HawkingMode) -> f64 {
    p_bar * mode.zeta_sq() + q_bar + p_bar * q_bar * mode.eta_sq()
}

fn q_bar_type1(p_bar: f64, mode: &HawkingMode) -> f64 {
    p_bar * mode.zeta_sq()
}

fn q_bar_type2(p_bar: f64, mode: &HawkingMode) -> f64 {
    let r2 = p_bar * mode.eta_sq();
    let root = (r2 * r2 + r2 + 1.0).sqrt();
    p_bar * mode.zeta_sq() * (root - r2).powi(2) / (1.0 + r2).powi(2)
}

fn average_fidelity_bars(p_bar: f64, q_bar: f64, mode: &HawkingMode) -> f64 {
    let n = n_factor(p_bar, q_bar, mode);
    (3.0 * (p_bar * mode.zeta_sq() + q_bar)
        + p_bar * q_bar * mode.eta_sq()
        + 2.0 * (p_bar * q_bar).sqrt() * mode.zeta())
        / (4.0 * n)
}

/// The four Bell-measurement outcomes on Alice's two qubits, together with
/// the Pauli correction each one triggers on the exterior region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BellOutcome {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellOutcome {
    pub const ALL: [Self; 4] = [Self::PhiPlus, Self::PhiMinus, Self::PsiPlus, Self::PsiMinus];

    pub fn label(self) -> &'static str {
        match self {
            Self::PhiPlus => "Phi+",
            Self::PhiMinus => "Phi-",
            Self::PsiPlus => "Psi+",
            Self::PsiMinus => "Psi-",
        }
    }

    /// Row vector ⟨bell| contracting the two measured modes.
    fn bra(self) -> DMatrix<C64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (a, b, c, d) = match self {
            Self::PhiPlus => (s, 0.0, 0.0, s),
            Self::PhiMinus => (s, 0.0, 0.0, -s),
            Self::PsiPlus => (0.0, s, s, 0.0),
            Self::PsiMinus => (0.0, s, -s, 0.0),
        };
        DMatrix::from_row_slice(
            1,
            4,
            &[C64::new(a, 0.0), C64::new(b, 0.0), C64::new(c, 0.0), C64::new(d, 0.0)],
        )
    }

    /// Correction dictionary: Phi+ → 1, Phi- → Z, Psi+ → X, Psi- → ZX.
    fn correction(self) -> DMatrix<C64> {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let m = C64::new(-1.0, 0.0);
        match self {
            Self::PhiPlus => DMatrix::from_row_slice(2, 2, &[l, o, o, l]),
            Self::PhiMinus => DMatrix::from_row_slice(2, 2, &[l, o, o, m]),
            Self::PsiPlus => DMatrix::from_row_slice(2, 2, &[o, l, l, o]),
            Self::PsiMinus => DMatrix::from_row_slice(2, 2, &[o, l, m, o]),
        }
    }
}

/// One Bell branch: the corrected conditional state of Bob's qubit and the
/// probability of the branch. Branches of vanishing weight report the
/// maximally mixed state.
#[derive(Clone, Debug)]
pub struct BellBranch {
    pub outcome: BellOutcome,
    pub conditional: DensityMatrix,
    pub weight: f64,
}

/// The full result of a protocol run.
#[derive(Clone, Debug)]
pub struct ProtocolOutcome {
    /// Bob's received state, mixed over the four Bell branches.
    pub rho_out: DensityMatrix,
    /// Overlap of the received state with the input.
    pub fidelity: f64,
    /// Probability that both kept weak-measurement branches occur, N/2.
    pub success_probability: f64,
    /// Concurrence of the shared pair between Alice and the exterior
    /// region, evaluated before the Bell measurement.
    pub concurrence_ai: f64,
    pub per_bell_outcome: Vec<BellBranch>,
}

/// The shared resource pair (|00⟩ + |11⟩)/√2 on (A, B).
pub fn epr_pair() -> StateVector {
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let o = C64::new(0.0, 0.0);
    StateVector::new(vec![MODE_A, MODE_B], vec![s, o, o, s]).expect("valid pair")
}

fn maximally_mixed(mode: Mode) -> DensityMatrix {
    let h = C64::new(0.5, 0.0);
    let o = C64::new(0.0, 0.0);
    DensityMatrix::new(vec![mode], DMatrix::from_row_slice(2, 2, &[h, o, o, h]))
        .expect("valid density matrix")
}

/// Runs the protocol as an explicit circuit on the full four-mode state.
///
/// This is the brute-force reference: every weak measurement, the horizon
/// embedding, the Bell projection, and the Pauli corrections are applied as
/// operators, and all reported quantities are read off the resulting
/// vectors. It makes no use of the closed forms it validates.
pub fn simulate_circuit(input: &InputState, config: &ProtocolConfig) -> Result<ProtocolOutcome> {
    let p = config.p().value();
    let q = config.resolved_q();

    let psi1 = qla::tensor_product(&input.ket(MODE_IN), &epr_pair())?;
    let (psi2, _) = weakmeas::apply_selective(&weakmeas::pre_weak_operator(p)?, MODE_B, &psi1)?;
    let psi3 = horizon::kruskal_embed(&psi2, MODE_B, config.mode())?;
    let (psi4, _) = weakmeas::apply_selective(&weakmeas::post_weak_operator(q)?, REGION_I, &psi3)?;

    let success_probability = psi4.squared_norm() / psi1.squared_norm();
    if success_probability <= 0.0 {
        return Err(Error::DegenerateProtocol(
            "both weak-measurement branches have zero weight",
        ));
    }
    let psi4 = psi4.normalize()?;

    // Shared-pair state before the Bell measurement, traced over the input
    // qubit and the interior region.
    let rho_full = DensityMatrix::from_pure(&psi4);
    let rho_ai = qla::partial_trace(&rho_full, &[MODE_A, REGION_I])?;
    let concurrence_ai = qla::concurrence_wootters(&rho_ai)?;

    let mut per_bell_outcome = Vec::with_capacity(4);
    let mut mixture = DMatrix::from_element(2, 2, C64::new(0.0, 0.0));
    for outcome in BellOutcome::ALL {
        let branch = qla::apply_map(&outcome.bra(), &[MODE_IN, MODE_A], &[], &psi4)?;
        let weight = branch.squared_norm();
        let corrected = qla::apply_local(&outcome.correction(), &[REGION_I], &branch)?;
        let conditional = if weight > ZERO_BRANCH_TOL {
            qla::partial_trace(&DensityMatrix::from_pure(&corrected), &[REGION_I])?.normalize()?
        } else {
            maximally_mixed(REGION_I)
        };
        mixture += conditional.entries().map(|e| e * weight);
        per_bell_outcome.push(BellBranch { outcome, conditional, weight });
    }
    let rho_out = DensityMatrix::new(vec![REGION_I], mixture)?;
    let fidelity = qla::fidelity_pure(&input.ket(REGION_I), &rho_out)?;

    Ok(ProtocolOutcome {
        rho_out,
        fidelity,
        success_probability,
        concurrence_ai,
        per_bell_outcome,
    })
}

/// Bob's received state in closed form, normalized by N.
pub fn closed_form_output(input: &InputState, config: &ProtocolConfig) -> Result<DensityMatrix> {
    let p_bar = config.p().complement();
    let q_bar = config.resolved_q_bar();
    let mode = config.mode();
    let n = n_factor(p_bar, q_bar, mode);
    if n <= 0.0 {
        return Err(Error::DegenerateProtocol("normalization factor N vanished"));
    }
    let a2 = input.alpha() * input.alpha();
    let b2 = input.beta().norm_sqr();
    let cross = 2.0 * input.alpha() * mode.zeta() * (p_bar * q_bar).sqrt() / n;
    let off = input.beta().conj() * cross;
    let d0 = (a2 * (p_bar * mode.zeta_sq() + q_bar) + b2 * p_bar * q_bar * mode.eta_sq()) / n;
    let d1 = (b2 * (p_bar * mode.zeta_sq() + q_bar) + a2 * p_bar * q_bar * mode.eta_sq()) / n;
    DensityMatrix::new(
        vec![REGION_I],
        DMatrix::from_row_slice(2, 2, &[C64::new(d0, 0.0), off, off.conj(), C64::new(d1, 0.0)]),
    )
}

/// Teleportation fidelity in closed form:
/// `[(α⁴+|β|⁴)(p̄ζ²+q̄) + 2α²|β|²p̄q̄η² + 4α²|β|²√(p̄q̄)ζ] / N`.
pub fn fidelity_closed(input: &InputState, config: &ProtocolConfig) -> Result<f64> {
    let p_bar = config.p().complement();
    let q_bar = config.resolved_q_bar();
    let mode = config.mode();
    let n = n_factor(p_bar, q_bar, mode);
    if n <= 0.0 {
        return Err(Error::DegenerateProtocol("normalization factor N vanished"));
    }
    let a2 = input.alpha() * input.alpha();
    let b2 = input.beta().norm_sqr();
    Ok(((a2 * a2 + b2 * b2) * (p_bar * mode.zeta_sq() + q_bar)
        + 2.0 * a2 * b2 * p_bar * q_bar * mode.eta_sq()
        + 4.0 * a2 * b2 * (p_bar * q_bar).sqrt() * mode.zeta())
        / n)
}

/// Average fidelity over the input angle θ with measure dθ/π:
/// `[3(p̄ζ²+q̄) + p̄q̄η² + 2√(p̄q̄)ζ] / 4N`.
pub fn average_fidelity(config: &ProtocolConfig) -> Result<f64> {
    let p_bar = config.p().complement();
    let q_bar = config.resolved_q_bar();
    let n = n_factor(p_bar, q_bar, config.mode());
    if n <= 0.0 {
        return Err(Error::DegenerateProtocol("normalization factor N vanished"));
    }
    Ok(average_fidelity_bars(p_bar, q_bar, config.mode()))
}

/// Quadrature companion of [`average_fidelity`]: integrates the closed-form
/// fidelity over θ ∈ [0, π] adaptively. Phase invariance lets δ stay fixed.
pub fn average_fidelity_numeric(config: &ProtocolConfig) -> Result<f64> {
    if config.n_factor() <= 0.0 {
        return Err(Error::DegenerateProtocol("normalization factor N vanished"));
    }
    let f = |theta: f64| {
        let input = InputState::new(theta, 0.0).expect("finite angle");
        fidelity_closed(&input, config).expect("N checked above")
    };
    Ok(numeric::adaptive_simpson(&f, 0.0, std::f64::consts::PI, 1e-11) / std::f64::consts::PI)
}

/// Branch-matching post-strength: q̄ = p̄ζ², i.e. q = 1 − (1−p)ζ².
pub fn q_type1(p: f64, mode: &HawkingMode) -> Result<f64> {
    let p = MeasurementStrength::new(p)?;
    if p.value() >= 1.0 {
        return Err(Error::DegenerateProtocol("p = 1 admits no optimal post-measurement"));
    }
    Ok(1.0 - q_bar_type1(p.complement(), mode))
}

/// Success probability of the branch-matching policy: `p̄ζ²(2 + p̄η²)/2`,
/// which is N/2 evaluated at q̄ = p̄ζ².
pub fn success_prob_type1(p: f64, mode: &HawkingMode) -> Result<f64> {
    let p = MeasurementStrength::new(p)?;
    let p_bar = p.complement();
    Ok(p_bar * mode.zeta_sq() / 2.0 * (2.0 + p_bar * mode.eta_sq()))
}

/// Fidelity-maximizing post-strength from the stationarity of the average
/// fidelity in q̄: q̄ = p̄ζ²(√(r⁴+r²+1) − r²)²/(1+r²)² with r = √p̄·η.
pub fn q_type2(p: f64, mode: &HawkingMode) -> Result<f64> {
    let p = MeasurementStrength::new(p)?;
    if p.value() >= 1.0 {
        return Err(Error::DegenerateProtocol("p = 1 admits no optimal post-measurement"));
    }
    Ok(1.0 - q_bar_type2(p.complement(), mode))
}

/// Independent numerical maximization of the average fidelity over
/// q̄ ∈ (0, 1]: a coarse 1e-3 grid brackets the maximum (ties resolved
/// toward the smallest q̄), then golden-section search refines it to an
/// absolute tolerance of 1e-10. Serves as the oracle for [`q_type2`].
///
/// The search objective is the algebraically equivalent infidelity
/// `1 − F_av = [(ζ√p̄ − √q̄)² + 3p̄q̄η²] / 4N`, which is free of
/// cancellation; the plain fidelity rounds to exactly 1 on a small
/// neighborhood of the optimum at zero temperature, where this form keeps
/// the maximum sharp.
pub fn optimize_q_numeric(p: f64, mode: &HawkingMode) -> Result<f64> {
    let p = MeasurementStrength::new(p)?;
    if p.value() >= 1.0 {
        return Err(Error::DegenerateProtocol("p = 1 admits no optimal post-measurement"));
    }
    let p_bar = p.complement();
    let f = |q_bar: f64| {
        let matched = mode.zeta() * p_bar.sqrt() - q_bar.sqrt();
        let infidelity = (matched * matched + 3.0 * p_bar * q_bar * mode.eta_sq())
            / (4.0 * n_factor(p_bar, q_bar, mode));
        -infidelity
    };

    const STEP: f64 = 1e-3;
    let mut best_k = 1usize;
    let mut best_f = f(STEP);
    for k in 2..=1000 {
        let v = f(k as f64 * STEP);
        if v > best_f {
            best_f = v;
            best_k = k;
        }
    }
    let lo = ((best_k as f64 - 1.0) * STEP).max(1e-12);
    let hi = ((best_k as f64 + 1.0) * STEP).min(1.0);
    let (q_bar, _) = numeric::golden_section_max(f, lo, hi, 1e-10);
    Ok(1.0 - q_bar)
}

/// Reduced state of the shared pair between Alice and the exterior region:
/// an X-shaped matrix with diagonal (p̄ζ², p̄q̄η², 0, q̄)/N and anti-diagonal
/// corner √(p̄q̄)ζ/N, over the modes (A, I).
pub fn reduced_state_ai(config: &ProtocolConfig) -> Result<DensityMatrix> {
    let p_bar = config.p().complement();
    let q_bar = config.resolved_q_bar();
    let mode = config.mode();
    let n = n_factor(p_bar, q_bar, mode);
    if n <= 0.0 {
        return Err(Error::DegenerateProtocol("normalization factor N vanished"));
    }
    let o = C64::new(0.0, 0.0);
    let corner = C64::new((p_bar * q_bar).sqrt() * mode.zeta() / n, 0.0);
    let mut m = DMatrix::from_element(4, 4, o);
    m[(0, 0)] = C64::new(p_bar * mode.zeta_sq() / n, 0.0);
    m[(1, 1)] = C64::new(p_bar * q_bar * mode.eta_sq() / n, 0.0);
    m[(3, 3)] = C64::new(q_bar / n, 0.0);
    m[(0, 3)] = corner;
    m[(3, 0)] = corner;
    DensityMatrix::new(vec![MODE_A, REGION_I], m)
}

/// Shared-pair concurrence in closed form: `2√(p̄q̄)ζ / N`.
pub fn concurrence_closed(config: &ProtocolConfig) -> Result<f64> {
    let p_bar = config.p().complement();
    let q_bar = config.resolved_q_bar();
    let n = n_factor(p_bar, q_bar, config.mode());
    if n <= 0.0 {
        return Err(Error::DegenerateProtocol("normalization factor N vanished"));
    }
    Ok(2.0 * (p_bar * q_bar).sqrt() * config.mode().zeta() / n)
}

/// Protocol success probability N/2.
pub fn success_probability(config: &ProtocolConfig) -> Result<f64> {
    let n = config.n_factor();
    if n <= 0.0 {
        return Err(Error::DegenerateProtocol("normalization factor N vanished"));
    }
    Ok(n / 2.0)
}
