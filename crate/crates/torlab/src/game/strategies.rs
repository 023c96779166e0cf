//! Strategies: the avoidance construction, the projection combinator, the
//! round-robin combinator, and Bob opponents (stationary, seeded random,
//! adversarial greedy).
//!
//! The avoidance strategy tracks iteration times k in a scale window: a
//! time becomes active once `||M^k|| * rho_n <= c2` and stays active until
//! Alice has pinned it with a certified margin, i.e. she has played a ball
//! whose M^k-image provably misses `B(y, delta)`. With alpha = 1/2 a time
//! whose bad point sits at Bob's center cannot be cleared in one round, so
//! times persist across rounds: the first round pushes the bad point
//! off-center, the next one clears it. Margins certified at clearing time
//! survive to the end of the game because later balls are nested.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Ball, GameError, Role, Space, SpaceKind, Strategy, Transcript};
use crate::torus::{BigMatrix, IntMatrix};
use crate::util::log2_rational_abs;

/// Per-game mutable state, threaded through the engine. One variant per
/// stateful strategy shipped here.
#[derive(Debug, Default)]
pub enum StrategyState {
    #[default]
    Empty,
    Avoid(AvoidState),
    Rng(Box<ChaCha8Rng>),
    Greedy(GreedyState),
    RoundRobin(Vec<StrategyState>),
}

// ---------------------------------------------------------------------------
// Simple strategies
// ---------------------------------------------------------------------------

/// Reuses the opponent's center; always admissible.
pub struct CenterKeeping;

impl Strategy for CenterKeeping {
    fn name(&self) -> String {
        "center-keeping".into()
    }

    fn choose(
        &self,
        view: &Transcript,
        _state: &mut StrategyState,
    ) -> Result<Vec<BigRational>, GameError> {
        Ok(view.last_ball().center.clone())
    }
}

/// Seeded random admissible Bob: uniform offset in the allowed cube at
/// 64-bit granularity.
pub struct RandomBob {
    pub seed: u64,
}

impl Strategy for RandomBob {
    fn name(&self) -> String {
        format!("random-bob({})", self.seed)
    }

    fn choose(
        &self,
        view: &Transcript,
        state: &mut StrategyState,
    ) -> Result<Vec<BigRational>, GameError> {
        if matches!(state, StrategyState::Empty) {
            *state = StrategyState::Rng(Box::new(ChaCha8Rng::seed_from_u64(self.seed)));
        }
        let StrategyState::Rng(rng) = state else {
            return Err(GameError::Config("random bob state clobbered".into()));
        };
        let outer = view.last_ball();
        let my_radius = next_radius_for(view, Role::Bob);
        let allowed = &outer.radius - &my_radius;
        let denom: BigInt = BigInt::one() << 64;
        let center = outer
            .center
            .iter()
            .map(|c| {
                let raw: u64 = rng.gen();
                // offset in [-allowed, allowed]
                let unit = BigRational::new(BigInt::from(raw), denom.clone());
                let offset = (&unit * BigRational::from(BigInt::from(2)) - BigRational::one())
                    * &allowed;
                c + offset
            })
            .collect();
        Ok(center)
    }
}

/// Adversarial Bob: walks a backward preimage chain of the target and
/// moves as close to the most threatening preimage as containment allows.
pub struct GreedyBob {
    pub matrix: IntMatrix,
    pub target: Vec<BigRational>,
    /// How many backward steps of preimages to track.
    pub depth: usize,
}

#[derive(Debug, Clone)]
pub struct GreedyState {
    /// `chain[k]` is a preimage of the target under `matrix^k`.
    chain: Vec<Vec<BigRational>>,
}

impl Strategy for GreedyBob {
    fn name(&self) -> String {
        "greedy-bob".into()
    }

    fn choose(
        &self,
        view: &Transcript,
        state: &mut StrategyState,
    ) -> Result<Vec<BigRational>, GameError> {
        if matches!(state, StrategyState::Empty) {
            *state = StrategyState::Greedy(GreedyState {
                chain: vec![self.target.clone()],
            });
        }
        let StrategyState::Greedy(gs) = state else {
            return Err(GameError::Config("greedy bob state clobbered".into()));
        };
        let outer = view.last_ball();
        let my_radius = next_radius_for(view, Role::Bob);
        let allowed = &outer.radius - &my_radius;
        let space = view.space;

        // extend the preimage chain lazily, steering toward the current ball
        while gs.chain.len() <= self.depth {
            let last = gs.chain.last().unwrap().clone();
            match nearest_preimage(&self.matrix, &last, &outer.center, &space) {
                Some(z) => gs.chain.push(z),
                None => break,
            }
        }
        // most threatening chain point: nearest to the current center
        let mut best: Option<(&Vec<BigRational>, BigRational)> = None;
        for z in gs.chain.iter().skip(1) {
            let d = space.distance(z, &outer.center);
            if best.as_ref().map(|(_, bd)| &d < bd).unwrap_or(true) {
                best = Some((z, d));
            }
        }
        let Some((target, _)) = best else {
            return Ok(outer.center.clone());
        };
        // move toward the target, clamped into the admissible cube
        let center = outer
            .center
            .iter()
            .zip(target.iter())
            .map(|(c, t)| {
                let delta = wrapped_signed_diff(t, c, &space);
                let step = clamp_abs(&delta, &allowed);
                c + step
            })
            .collect();
        Ok(center)
    }
}

/// Signed difference, reduced to `(-1/2, 1/2]` on the torus.
fn wrapped_signed_diff(a: &BigRational, b: &BigRational, space: &Space) -> BigRational {
    let diff = a - b;
    match space.kind {
        SpaceKind::Leaf => diff,
        SpaceKind::Torus => {
            let frac = &diff - diff.floor();
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            if frac > half {
                frac - BigRational::one()
            } else {
                frac
            }
        }
    }
}

fn clamp_abs(x: &BigRational, bound: &BigRational) -> BigRational {
    if x > bound {
        bound.clone()
    } else if *x < -bound.clone() {
        -bound.clone()
    } else {
        x.clone()
    }
}

/// One preimage of `z` under the matrix on the torus, the representative
/// nearest to `near`. Enumerates the |det| cosets.
fn nearest_preimage(
    m: &IntMatrix,
    z: &[BigRational],
    near: &[BigRational],
    space: &Space,
) -> Option<Vec<BigRational>> {
    let d = m.dim();
    let det = m.det();
    let order = det.magnitude().to_usize()?.max(1);
    let mr: Vec<Vec<BigRational>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| BigRational::from(BigInt::from(m.entry(i, j))))
                .collect()
        })
        .collect();
    let mut best: Option<(Vec<BigRational>, BigRational)> = None;
    let mut shift = vec![0usize; d];
    loop {
        let rhs: Vec<BigRational> = z
            .iter()
            .zip(shift.iter())
            .map(|(c, &s)| c + BigRational::from(BigInt::from(s)))
            .collect();
        if let Some(x) = crate::spectral::refine::solve_rational(&mr, &rhs) {
            let x: Vec<BigRational> = x.iter().map(|c| c - c.floor()).collect();
            let dist = space.distance(&x, near);
            if best.as_ref().map(|(_, bd)| &dist < bd).unwrap_or(true) {
                best = Some((x, dist));
            }
        }
        // next multi-index over [0, order)^d
        let mut carry = true;
        for s in shift.iter_mut() {
            if carry {
                *s += 1;
                if *s >= order {
                    *s = 0;
                } else {
                    carry = false;
                }
            }
        }
        if carry {
            break;
        }
    }
    best.map(|(x, _)| x)
}

/// Radius the engine will assign to the next move of `role`.
fn next_radius_for(view: &Transcript, role: Role) -> BigRational {
    let n = view.rounds();
    match role {
        // Alice moves first in round n+1
        Role::Alice => view.params.radius_alice(n + 1),
        // Bob replies within the same round
        Role::Bob => view.params.radius_bob(n),
    }
}

// ---------------------------------------------------------------------------
// Avoidance strategy
// ---------------------------------------------------------------------------

/// Configuration of the avoidance strategy. The window constants and grid
/// are tunable; `delta` is the margin at which an iteration time counts as
/// cleared.
#[derive(Debug, Clone)]
pub struct AvoidConfig {
    /// Lower scale constant (window floor, for validation and reporting).
    pub c1: BigRational,
    /// Activation threshold: time k becomes active once `||M^k|| rho_n <= c2`.
    pub c2: BigRational,
    /// Grid points per axis for candidate Alice centers.
    pub grid_per_axis: usize,
    /// Clearing margin.
    pub delta: BigRational,
    /// Safety cap on tracked iteration times.
    pub max_time: u32,
}

impl AvoidConfig {
    /// Defaults tied to the game geometry: `c1 = 1/8`, `c2 = 1/2`, a 5-point
    /// grid per axis, and `delta = rho (alpha beta)^R / 4`.
    pub fn for_game(params: &super::GameParams, rounds: usize) -> Self {
        let ab = &params.alpha * &params.beta;
        let delta = &params.initial.radius * super::pow_rational(&ab, rounds)
            / BigRational::from(BigInt::from(4));
        AvoidConfig {
            c1: BigRational::new(BigInt::one(), BigInt::from(8)),
            c2: BigRational::new(BigInt::one(), BigInt::from(2)),
            grid_per_axis: 5,
            delta,
            max_time: 4096,
        }
    }

    fn validate(&self) -> Result<(), GameError> {
        if self.c1 >= self.c2 {
            return Err(GameError::Config(
                "avoidance window infeasible: c1 >= c2".into(),
            ));
        }
        if self.grid_per_axis < 2 {
            return Err(GameError::Config("grid needs at least 2 points".into()));
        }
        if !self.delta.is_positive() {
            return Err(GameError::Config("delta must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Default)]
pub struct AvoidState {
    /// `powers[k]` is `M^k`, grown on demand.
    powers: Vec<BigMatrix>,
    norms: Vec<BigUint>,
    /// Next iteration time that has never been activated.
    next_time: u32,
    /// Active times: in the scale window, not yet cleared with margin.
    active: Vec<u32>,
    /// Cleared times with their certified margins.
    cleared: Vec<(u32, BigRational)>,
}

impl AvoidState {
    fn power(&mut self, m: &IntMatrix, k: u32) -> (&BigMatrix, &BigUint) {
        while self.powers.len() <= k as usize {
            let next = match self.powers.last() {
                None => BigMatrix::identity(m.dim()),
                Some(p) => p.mul(&BigMatrix::from_int_matrix(m)),
            };
            self.norms.push(next.inf_norm());
            self.powers.push(next);
        }
        (&self.powers[k as usize], &self.norms[k as usize])
    }
}

/// Alice strategy for finite-horizon avoidance of the target's orbit
/// preimages: the limit point's `M^k` images stay out of `B(y, delta)` for
/// every cleared time k.
pub struct AvoidStrategy {
    pub matrix: IntMatrix,
    pub target: Vec<BigRational>,
    pub config: AvoidConfig,
}

/// Builds the avoidance strategy (Theorem-2.2 realization at finite
/// horizon). Requires alpha = 1/2 at play time.
pub fn avoid_strategy(
    matrix: IntMatrix,
    target: Vec<BigRational>,
    config: AvoidConfig,
) -> Result<AvoidStrategy, GameError> {
    config.validate()?;
    if matrix.dim() != target.len() {
        return Err(GameError::DimensionMismatch {
            expected: matrix.dim(),
            got: target.len(),
        });
    }
    Ok(AvoidStrategy {
        matrix,
        target,
        config,
    })
}

impl AvoidStrategy {
    fn margin(
        &self,
        state: &mut AvoidState,
        k: u32,
        center: &[BigRational],
        alice_radius: &BigRational,
        space: &Space,
    ) -> BigRational {
        let (power, norm) = {
            let (p, n) = state.power(&self.matrix, k);
            (p.clone(), n.clone())
        };
        let image = power.apply_rational(center);
        let image: Vec<BigRational> = image.iter().map(|c| c - c.floor()).collect();
        let dist = space.distance(&image, &self.target);
        dist - BigRational::from(BigInt::from(norm)) * alice_radius
    }
}

impl Strategy for AvoidStrategy {
    fn name(&self) -> String {
        "avoid".into()
    }

    fn required_alpha(&self) -> Option<BigRational> {
        Some(BigRational::new(BigInt::one(), BigInt::from(2)))
    }

    fn choose(
        &self,
        view: &Transcript,
        state: &mut StrategyState,
    ) -> Result<Vec<BigRational>, GameError> {
        if matches!(state, StrategyState::Empty) {
            *state = StrategyState::Avoid(AvoidState {
                next_time: 1,
                ..AvoidState::default()
            });
        }
        let StrategyState::Avoid(st) = state else {
            return Err(GameError::Config("avoid state clobbered".into()));
        };
        let outer = view.last_ball().clone();
        let alice_radius = next_radius_for(view, Role::Alice);
        let allowed = &outer.radius - &alice_radius;
        let space = view.space;

        // activate every time whose scale has come down into the window
        while st.next_time <= self.config.max_time {
            let k = st.next_time;
            let (_, norm) = st.power(&self.matrix, k);
            let scaled = BigRational::from(BigInt::from(norm.clone())) * &outer.radius;
            if scaled <= self.config.c2 {
                st.active.push(k);
                st.next_time += 1;
            } else {
                break;
            }
        }

        if st.active.is_empty() {
            // nothing to avoid at this scale: concentric ball
            return Ok(outer.center.clone());
        }

        // candidate grid, extremes included
        let g = self.config.grid_per_axis;
        let dim = space.dim;
        let mut best: Option<(Vec<BigRational>, BigRational)> = None;
        let mut index = vec![0usize; dim];
        loop {
            let candidate: Vec<BigRational> = outer
                .center
                .iter()
                .zip(index.iter())
                .map(|(c, &i)| {
                    // offsets spread over [-allowed, allowed]
                    let t = BigRational::new(BigInt::from(i as i64), BigInt::from((g - 1) as i64));
                    let offset = (&t * BigRational::from(BigInt::from(2)) - BigRational::one())
                        * &allowed;
                    c + offset
                })
                .collect();
            let mut score: Option<BigRational> = None;
            let active = st.active.clone();
            for &k in &active {
                let m = self.margin(st, k, &candidate, &alice_radius, &space);
                score = Some(match score {
                    None => m,
                    Some(s) => s.min(m),
                });
            }
            let score = score.expect("active nonempty");
            if best.as_ref().map(|(_, bs)| &score > bs).unwrap_or(true) {
                best = Some((candidate, score));
            }
            // advance the multi-index
            let mut carry = true;
            for ix in index.iter_mut() {
                if carry {
                    *ix += 1;
                    if *ix >= g {
                        *ix = 0;
                    } else {
                        carry = false;
                    }
                }
            }
            if carry {
                break;
            }
        }
        let (choice, _) = best.expect("grid nonempty");

        // record cleared times: margin certified against the chosen ball
        let mut still_active = Vec::new();
        for &k in &st.active.clone() {
            let m = self.margin(st, k, &choice, &alice_radius, &space);
            if m >= self.config.delta {
                st.cleared.push((k, m));
            } else {
                still_active.push(k);
            }
        }
        st.active = still_active;
        Ok(choice)
    }
}

// ---------------------------------------------------------------------------
// Projection combinator
// ---------------------------------------------------------------------------

/// Plays a product-space strategy on a factor: Bob's factor balls are
/// lifted over a fixed fiber basepoint, the inner strategy answers in the
/// product, and the answer is projected back. Radii carry over unchanged
/// because the product metric is the max of the factor metrics. The
/// projected center is clamped into admissibility when the inner move's
/// fiber drift would break the factor containment (the ambient and product
/// metrics differ unless the embedding is orthonormal).
pub struct ProjectedStrategy {
    inner: Box<dyn Strategy>,
    /// Columns embed factor coordinates into the ambient space.
    embed: Vec<Vec<BigRational>>,
    /// Rows extract factor coordinates: `coords * (u - basepoint)`.
    coords: Vec<Vec<BigRational>>,
    basepoint: Vec<BigRational>,
    ambient_dim: usize,
}

/// Builds the projection of `inner` onto the factor spanned by
/// `embed_cols`; `complement_cols` span the fiber directions (together they
/// must form a basis of the ambient space).
pub fn project_strategy(
    inner: Box<dyn Strategy>,
    embed_cols: Vec<Vec<BigRational>>,
    complement_cols: Vec<Vec<BigRational>>,
    basepoint: Vec<BigRational>,
) -> Result<ProjectedStrategy, GameError> {
    let v = embed_cols.len();
    let d = basepoint.len();
    if v == 0 || v + complement_cols.len() != d {
        return Err(GameError::Config(
            "embedding and complement must form an ambient basis".into(),
        ));
    }
    for col in embed_cols.iter().chain(complement_cols.iter()) {
        if col.len() != d {
            return Err(GameError::DimensionMismatch {
                expected: d,
                got: col.len(),
            });
        }
    }
    // full change of basis B = [embed | complement]; coords = first v rows
    // of B^{-1}
    let mut b: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); d]; d];
    for (j, col) in embed_cols.iter().chain(complement_cols.iter()).enumerate() {
        for i in 0..d {
            b[i][j] = col[i].clone();
        }
    }
    let mut coords = Vec::with_capacity(v);
    for row in 0..v {
        // solve B^T x = e_row to get row `row` of B^{-1}
        let bt: Vec<Vec<BigRational>> = (0..d)
            .map(|i| (0..d).map(|j| b[j][i].clone()).collect())
            .collect();
        let mut e = vec![BigRational::zero(); d];
        e[row] = BigRational::one();
        let x = crate::spectral::refine::solve_rational(&bt, &e)
            .ok_or_else(|| GameError::Config("embedding basis is singular".into()))?;
        coords.push(x);
    }
    Ok(ProjectedStrategy {
        inner,
        embed: embed_cols,
        coords,
        basepoint,
        ambient_dim: d,
    })
}

impl ProjectedStrategy {
    fn lift_center(&self, c: &[BigRational]) -> Vec<BigRational> {
        let mut out = self.basepoint.clone();
        for (col, coeff) in self.embed.iter().zip(c.iter()) {
            for (o, e) in out.iter_mut().zip(col.iter()) {
                *o += coeff * e;
            }
        }
        out
    }

    fn lift_view(&self, view: &Transcript) -> Transcript {
        let space = Space::torus(self.ambient_dim);
        let moves = view
            .moves
            .iter()
            .map(|(role, ball)| {
                let lifted = space.normalize(&self.lift_center(&ball.center));
                (*role, Ball::new(lifted, ball.radius.clone()))
            })
            .collect::<Vec<_>>();
        let initial = moves[0].1.clone();
        Transcript {
            space,
            params: super::GameParams {
                alpha: view.params.alpha.clone(),
                beta: view.params.beta.clone(),
                initial,
            },
            moves,
            valid: view.valid,
            violation: view.violation.clone(),
        }
    }
}

impl Strategy for ProjectedStrategy {
    fn name(&self) -> String {
        format!("projected({})", self.inner.name())
    }

    fn required_alpha(&self) -> Option<BigRational> {
        self.inner.required_alpha()
    }

    fn choose(
        &self,
        view: &Transcript,
        state: &mut StrategyState,
    ) -> Result<Vec<BigRational>, GameError> {
        let lifted_view = self.lift_view(view);
        let answer = self.inner.choose(&lifted_view, state)?;
        // express the answer relative to the lifted outer center, unwrapped
        let outer = view.last_ball();
        let lifted_outer = Space::torus(self.ambient_dim).normalize(&self.lift_center(&outer.center));
        let ambient = Space::torus(self.ambient_dim);
        let diff: Vec<BigRational> = answer
            .iter()
            .zip(lifted_outer.iter())
            .map(|(a, b)| wrapped_signed_diff(a, b, &ambient))
            .collect();
        let mut offset: Vec<BigRational> = self
            .coords
            .iter()
            .map(|row| {
                let mut acc = BigRational::zero();
                for (r, d) in row.iter().zip(diff.iter()) {
                    acc += r * d;
                }
                acc
            })
            .collect();
        // clamp into the admissible factor ball
        let alice_radius = next_radius_for(view, Role::Alice);
        let allowed = &outer.radius - &alice_radius;
        let worst = offset
            .iter()
            .map(|c| c.abs())
            .fold(BigRational::zero(), |a, b| a.max(b));
        if worst > allowed && worst.is_positive() {
            let scale = &allowed / &worst;
            for c in offset.iter_mut() {
                *c *= &scale;
            }
        }
        Ok(outer
            .center
            .iter()
            .zip(offset.iter())
            .map(|(c, o)| c + o)
            .collect())
    }
}

// ---------------------------------------------------------------------------
// Round-robin combinator
// ---------------------------------------------------------------------------

/// Cycles through delegate strategies, one per round; each delegate sees a
/// thinned transcript in which every ball it did not choose is presented
/// as a Bob move.
pub struct RoundRobin {
    delegates: Vec<Box<dyn Strategy>>,
}

pub fn round_robin_strategy(delegates: Vec<Box<dyn Strategy>>) -> Result<RoundRobin, GameError> {
    if delegates.is_empty() {
        return Err(GameError::Config("round robin needs a delegate".into()));
    }
    let mut alpha: Option<BigRational> = None;
    for d in &delegates {
        if let Some(a) = d.required_alpha() {
            match &alpha {
                None => alpha = Some(a),
                Some(existing) if *existing != a => {
                    return Err(GameError::Config(
                        "round robin delegates require mixed alpha values".into(),
                    ));
                }
                _ => {}
            }
        }
    }
    Ok(RoundRobin { delegates })
}

impl Strategy for RoundRobin {
    fn name(&self) -> String {
        format!("round-robin({})", self.delegates.len())
    }

    fn required_alpha(&self) -> Option<BigRational> {
        self.delegates.iter().find_map(|d| d.required_alpha())
    }

    fn choose(
        &self,
        view: &Transcript,
        state: &mut StrategyState,
    ) -> Result<Vec<BigRational>, GameError> {
        if matches!(state, StrategyState::Empty) {
            *state = StrategyState::RoundRobin(
                self.delegates
                    .iter()
                    .map(|_| StrategyState::Empty)
                    .collect(),
            );
        }
        let StrategyState::RoundRobin(states) = state else {
            return Err(GameError::Config("round robin state clobbered".into()));
        };
        let k = self.delegates.len();
        let round = view.rounds() + 1; // the round being played now
        let idx = (round - 1) % k;
        let own_rounds: BTreeSet<usize> = (1..=round).filter(|r| (r - 1) % k == idx).collect();
        let thinned = view.thinned_view(&own_rounds);
        self.delegates[idx].choose(&thinned, &mut states[idx])
    }
}

// ---------------------------------------------------------------------------
// Avoidance verification helper
// ---------------------------------------------------------------------------

/// Measures `min_{0 <= n <= horizon} dist(M^n x, y)` exactly for a rational
/// point, the post-hoc verifier for avoidance claims.
pub fn orbit_avoidance_margin(
    m: &IntMatrix,
    x: &[BigRational],
    y: &[BigRational],
    horizon: usize,
) -> BigRational {
    let space = Space::torus(m.dim());
    let mut current: Vec<BigRational> = x.iter().map(|c| c - c.floor()).collect();
    let big = BigMatrix::from_int_matrix(m);
    let mut best = space.distance(&current, y);
    for _ in 1..=horizon {
        current = big
            .apply_rational(&current)
            .iter()
            .map(|c| c - c.floor())
            .collect();
        let d = space.distance(&current, y);
        if d < best {
            best = d;
        }
    }
    best
}

/// log2 of a margin, for report formatting.
pub fn margin_log2(margin: &BigRational) -> f64 {
    log2_rational_abs(margin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{limit_point, play, GameParams};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn cat_t() -> IntMatrix {
        IntMatrix::new(2, vec![1, 1, 1, 2]).unwrap()
    }

    fn half_params(center: Vec<BigRational>) -> GameParams {
        GameParams::new(rat(1, 2), rat(1, 2), Ball::new(center, rat(1, 4))).unwrap()
    }

    #[test]
    fn avoid_beats_stationary_bob() {
        let params = half_params(vec![rat(1, 3), rat(1, 7)]);
        let target = vec![rat(0, 1), rat(0, 1)];
        let cfg = AvoidConfig::for_game(&params, 40);
        let delta = cfg.delta.clone();
        let alice = avoid_strategy(cat_t(), target.clone(), cfg).unwrap();
        let t = play(&alice, &CenterKeeping, &params, Space::torus(2), 40).unwrap();
        assert!(t.valid, "violation: {:?}", t.violation);
        let (limit, err) = limit_point(&t).unwrap();
        assert_eq!(err, rat(1, 4) * crate::game::pow_rational(&rat(1, 4), 40));
        let margin = orbit_avoidance_margin(&cat_t(), &limit, &target, 200);
        assert!(
            margin >= delta / rat(2, 1),
            "margin 2^{}",
            margin_log2(&margin)
        );
    }

    #[test]
    fn avoid_beats_greedy_bob() {
        let params = half_params(vec![rat(1, 3), rat(1, 7)]);
        let target = vec![rat(0, 1), rat(0, 1)];
        let cfg = AvoidConfig::for_game(&params, 40);
        let delta = cfg.delta.clone();
        let alice = avoid_strategy(cat_t(), target.clone(), cfg).unwrap();
        let bob = GreedyBob {
            matrix: cat_t(),
            target: target.clone(),
            depth: 64,
        };
        let t = play(&alice, &bob, &params, Space::torus(2), 40).unwrap();
        assert!(t.valid, "violation: {:?}", t.violation);
        let (limit, _) = limit_point(&t).unwrap();
        let margin = orbit_avoidance_margin(&cat_t(), &limit, &target, 200);
        assert!(
            margin >= delta / rat(2, 1),
            "margin 2^{}",
            margin_log2(&margin)
        );
    }

    #[test]
    fn avoid_requires_half_alpha() {
        let params = GameParams::new(
            rat(1, 3),
            rat(1, 2),
            Ball::new(vec![rat(0, 1), rat(0, 1)], rat(1, 4)),
        )
        .unwrap();
        let cfg = AvoidConfig::for_game(&params, 10);
        let alice = avoid_strategy(cat_t(), vec![rat(0, 1), rat(0, 1)], cfg).unwrap();
        let err = play(&alice, &CenterKeeping, &params, Space::torus(2), 10).unwrap_err();
        assert!(matches!(err, GameError::Config(_)));
    }

    #[test]
    fn infeasible_window_rejected() {
        let params = half_params(vec![rat(0, 1), rat(0, 1)]);
        let mut cfg = AvoidConfig::for_game(&params, 10);
        cfg.c1 = cfg.c2.clone();
        assert!(avoid_strategy(cat_t(), vec![rat(0, 1), rat(0, 1)], cfg).is_err());
    }

    #[test]
    fn projected_center_keeping_is_center_keeping() {
        // embed the first axis of T^2
        let embed = vec![vec![rat(1, 1), rat(0, 1)]];
        let comp = vec![vec![rat(0, 1), rat(1, 1)]];
        let base = vec![rat(0, 1), rat(0, 1)];
        let proj = project_strategy(Box::new(CenterKeeping), embed, comp, base).unwrap();
        let params = GameParams::new(
            rat(1, 2),
            rat(1, 2),
            Ball::new(vec![rat(1, 5)], rat(1, 4)),
        )
        .unwrap();
        let t = play(&proj, &CenterKeeping, &params, Space::leaf(1), 8).unwrap();
        assert!(t.valid);
        let (limit, _) = limit_point(&t).unwrap();
        assert_eq!(limit, vec![rat(1, 5)]);
    }

    #[test]
    fn round_robin_single_matches_delegate() {
        let params = half_params(vec![rat(1, 3), rat(1, 7)]);
        let target = vec![rat(0, 1), rat(0, 1)];
        let cfg = AvoidConfig::for_game(&params, 20);
        let alice_direct = avoid_strategy(cat_t(), target.clone(), cfg.clone()).unwrap();
        let alice_rr = round_robin_strategy(vec![Box::new(
            avoid_strategy(cat_t(), target.clone(), cfg).unwrap(),
        )])
        .unwrap();
        let bob = RandomBob { seed: 11 };
        let t1 = play(&alice_direct, &bob, &params, Space::torus(2), 20).unwrap();
        let t2 = play(&alice_rr, &bob, &params, Space::torus(2), 20).unwrap();
        assert_eq!(t1.moves, t2.moves);
    }

    #[test]
    fn round_robin_two_targets_avoids_both() {
        let params = half_params(vec![rat(1, 3), rat(1, 7)]);
        let y1 = vec![rat(0, 1), rat(0, 1)];
        let y2 = vec![rat(1, 2), rat(1, 2)];
        let cfg = AvoidConfig::for_game(&params, 40);
        let delta = cfg.delta.clone();
        let rr = round_robin_strategy(vec![
            Box::new(avoid_strategy(cat_t(), y1.clone(), cfg.clone()).unwrap()),
            Box::new(avoid_strategy(cat_t(), y2.clone(), cfg).unwrap()),
        ])
        .unwrap();
        let bob = RandomBob { seed: 5 };
        let t = play(&rr, &bob, &params, Space::torus(2), 40).unwrap();
        assert!(t.valid);
        let (limit, _) = limit_point(&t).unwrap();
        for y in [&y1, &y2] {
            let margin = orbit_avoidance_margin(&cat_t(), &limit, y, 200);
            assert!(
                margin >= delta / rat(4, 1),
                "margin 2^{}",
                margin_log2(&margin)
            );
        }
    }

    #[test]
    fn random_bob_is_deterministic_per_seed() {
        let params = half_params(vec![rat(1, 3), rat(1, 7)]);
        let bob = RandomBob { seed: 9 };
        let keep = CenterKeeping;
        let t1 = play(&keep, &bob, &params, Space::torus(2), 12).unwrap();
        let t2 = play(&keep, &bob, &params, Space::torus(2), 12).unwrap();
        assert_eq!(t1.moves, t2.moves);
        assert!(t1.valid);
    }
}
