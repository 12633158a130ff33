use core_oracles::{Psi, WeightSchedule};
use learners::Strategy;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Payoff {
    /// `⟨x, y⟩ − f*(y)`
    Fenchel,
    /// `⟨x, y⟩ − f*(y) + ψ(x)`
    Composite { psi: Psi },
    /// `⟨x, y⟩ − f̃*(y) + μφ(x)` with `f̃ = f − μφ` and `φ = ½‖·‖²`.
    StronglyConvexSplit { mu: f64, l_phi: f64 },
}

impl Payoff {
    /// The x-player's non-linear part.
    pub fn x_psi(&self) -> Psi {
        match self {
            Payoff::Fenchel => Psi::Zero,
            Payoff::Composite { psi } => *psi,
            Payoff::StronglyConvexSplit { mu, .. } => Psi::HalfSq(*mu),
        }
    }
}

/// Which player commits first each round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ordering {
    YFirst,
    /// Swapped roles: the x-player moves first and the y-player sees `x_t`.
    XFirst,
}

/// Where the y-player's action comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GradientSource {
    /// The y-player's learner over the gradient space of `f`.
    Full,
    /// `y_t = Σ_i g_i` with one component `g_{i_t} = ∇f_{i_t}(x̄_{t−1})/n`
    /// refreshed per round, cycling `i_t = (t−1) mod n`.
    CyclicComponents,
}

/// Start point when `x0` is not given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitRule {
    CanonicalPoint,
    Origin,
    /// `lmo(∇f(c))` with `c` the set's canonical point.
    LmoAtCanonical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub payoff: Payoff,
    pub x_strategy: Strategy,
    pub y_strategy: Strategy,
    pub weights: WeightSchedule,
    pub ordering: Ordering,
    pub t_max: usize,
    /// `x_0`: prox center / first action of the x-player, hint for an
    /// optimistic y-player and the point `w_0` of `FTL[∇f(w_0)]`.
    pub x0: Option<Vec<f64>>,
    pub init: InitRule,
    /// Comparator for the x-player's regret; defaults to the best fixed
    /// action in hindsight when that minimizer exists.
    pub comparator: Option<Vec<f64>>,
    pub gradient_source: GradientSource,
}

impl GameConfig {
    pub fn new(
        x_strategy: Strategy,
        y_strategy: Strategy,
        weights: WeightSchedule,
        t_max: usize,
    ) -> Self {
        GameConfig {
            payoff: Payoff::Fenchel,
            x_strategy,
            y_strategy,
            weights,
            ordering: Ordering::YFirst,
            t_max,
            x0: None,
            init: InitRule::CanonicalPoint,
            comparator: None,
            gradient_source: GradientSource::Full,
        }
    }
}
