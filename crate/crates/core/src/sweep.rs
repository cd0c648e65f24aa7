//! The full self-check battery. Each criterion is a standalone function so
//! the test suite and the command line can run exactly the same checks; the
//! sweep caches modules because several criteria revisit the same builds.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::casimir::{
    casimir_eigenvalue_closed, casimir_eigenvalue_recursive, glk_invariant_eigenvalue,
};
use crate::charmat::{
    invariant_scalars, prop1_sample, reduced_family_pq, reduced_identity_roots, root_minimality,
    theorem6_full_roots, verify_prop1, verify_prop2, verify_theorem5_at, verify_theorem5_reduced,
    verify_theorem6, verify_theorem6_reduced,
};
use crate::charmat::{char_matrix, split_casimir};
use crate::exact::Rat;
use crate::gt::{build_module, ModuleRep};
use crate::par::ExecMode;
use crate::tensor::{
    decompose_by_weights, dimension_audit, lr_decompose, pieri_vector, stability_check,
};
use crate::weights::{enumerate_partitions, HighestWeight};

#[derive(Clone, Copy, Debug)]
pub struct SweepConfig {
    /// Cap on invariant orders; the checks never go past their own bounds,
    /// a smaller cap just shrinks them.
    pub m_max: u32,
    pub seed: u64,
    pub mode: ExecMode,
    /// Test hook: silently corrupts one generator entry before the oracle
    /// integrity check. A healthy harness must then fail.
    pub inject_fault: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            m_max: 6,
            seed: 0,
            mode: ExecMode::default(),
            inject_fault: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    /// Wall-clock time; excluded from serialization so reports stay
    /// byte-identical across runs.
    #[serde(skip_serializing)]
    pub seconds: f64,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] criterion {:>2} {:<28} {:>7.2}s  {}",
            if self.passed { "pass" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

/// Shared module store so repeated builds are paid for once.
#[derive(Default)]
pub struct ModuleCache {
    built: BTreeMap<(usize, Vec<i64>), ModuleRep>,
}

impl ModuleCache {
    pub fn get(&mut self, n: usize, lambda: &HighestWeight) -> Result<&ModuleRep, String> {
        let key = (n, lambda.parts().to_vec());
        if !self.built.contains_key(&key) {
            let rep = build_module(n, lambda).map_err(|e| e.to_string())?;
            self.built.insert(key.clone(), rep);
        }
        Ok(&self.built[&key])
    }

    pub fn iter(&self) -> impl Iterator<Item = &ModuleRep> {
        self.built.values()
    }
}

fn run_one<F>(id: u32, name: &'static str, f: F) -> CriterionOutcome
where
    F: FnOnce() -> Result<String, String>,
{
    let start = Instant::now();
    let result = f();
    let seconds = start.elapsed().as_secs_f64();
    match result {
        Ok(detail) => CriterionOutcome {
            id,
            name,
            passed: true,
            detail,
            seconds,
        },
        Err(detail) => CriterionOutcome {
            id,
            name,
            passed: false,
            detail,
            seconds,
        },
    }
}

/// Every partition with at most `depth` rows and size at most `size`.
fn weight_grid(depth: usize, size: i64) -> Vec<HighestWeight> {
    enumerate_partitions(depth, size)
}

/// Criterion 1: closed form, recursion, and the module scalar all agree,
/// at every rank from the depth to depth + 2.
pub fn c1_formula_cross_validation(cfg: &SweepConfig, cache: &mut ModuleCache) -> CriterionOutcome {
    run_one(1, "eigenvalue cross-validation", || {
        let m_top = cfg.m_max.min(6);
        let mut checked = 0usize;
        for lam in weight_grid(3, 6) {
            let k = lam.depth();
            let closed: Vec<Rat> = (1..=m_top)
                .map(|m| casimir_eigenvalue_closed(&lam, m))
                .collect();
            for (idx, c) in closed.iter().enumerate() {
                let m = idx as u32 + 1;
                let r = casimir_eigenvalue_recursive(&lam, m);
                if *c != r {
                    return Err(format!("closed {c} != recursive {r} at {lam}, m = {m}"));
                }
            }
            for n in [k, k + 1, k + 2] {
                let rep = cache.get(n, &lam)?;
                let scalars =
                    invariant_scalars(rep, m_top, cfg.mode).map_err(|e| e.to_string())?;
                if scalars != closed {
                    return Err(format!("module scalars diverge at {lam}, n = {n}"));
                }
                checked += m_top as usize;
            }
        }
        Ok(format!(
            "{} (weight, rank, order) triples agree three ways",
            checked
        ))
    })
}

/// Criterion 2: the quadratic eigenvalue is the invariant bilinear form.
pub fn c2_quadratic_form(_cfg: &SweepConfig) -> CriterionOutcome {
    run_one(2, "quadratic form consistency", || {
        let grid = weight_grid(3, 6);
        for lam in &grid {
            let expected = Rat::from_int(lam.c2());
            let closed = casimir_eigenvalue_closed(lam, 2);
            let recursive = casimir_eigenvalue_recursive(lam, 2);
            if closed != expected || recursive != expected {
                return Err(format!(
                    "chi(I_2) = {closed} but (lambda, lambda + 2 rho) = {expected} at {lam}"
                ));
            }
        }
        Ok(format!("{} weights match the pairing", grid.len()))
    })
}

/// Criterion 3: the finite-rank trace formula against the raw block trace
/// at the weight's own depth.
pub fn c3_finite_rank_traces(cfg: &SweepConfig, cache: &mut ModuleCache) -> CriterionOutcome {
    run_one(3, "finite-rank trace formula", || {
        let m_top = cfg.m_max.min(4);
        let mut checked = 0usize;
        for lam in weight_grid(3, 5) {
            let k = lam.depth();
            let rep = cache.get(k, &lam)?;
            let a = char_matrix(rep);
            let mut pow = crate::charmat::BlockOperator::identity(a.outer_dim(), a.inner_dim());
            for m in 1..=m_top {
                pow = pow.compose(&a, cfg.mode);
                let scalar = pow
                    .block_trace()
                    .scalar_identity_value()
                    .ok_or_else(|| format!("non-scalar trace at {lam}, m = {m}"))?;
                let formula = glk_invariant_eigenvalue(&lam, k, m).map_err(|e| e.to_string())?;
                if scalar != formula {
                    return Err(format!(
                        "trace {scalar} != formula {formula} at {lam}, m = {m}"
                    ));
                }
                checked += 1;
            }
        }
        Ok(format!("{checked} trace scalars match the root formula"))
    })
}

/// Criterion 4: the characteristic identity annihilates at the natural rank
/// and one rank higher, with the same roots.
pub fn c4_characteristic_identity(cfg: &SweepConfig) -> CriterionOutcome {
    run_one(4, "characteristic identity", || {
        let shapes = [
            vec![1],
            vec![2],
            vec![1, 1],
            vec![2, 1],
            vec![2, 2],
            vec![3, 1, 1],
        ];
        for parts in shapes {
            let lam = HighestWeight::new(parts).expect("grid shapes are dominant");
            let k = lam.depth();
            let low = verify_theorem5_at(&lam, k + 1, cfg.mode).map_err(|e| e.to_string())?;
            let high = verify_theorem5_at(&lam, k + 2, cfg.mode).map_err(|e| e.to_string())?;
            if low.roots != high.roots {
                return Err(format!("roots moved with the rank at {lam}"));
            }
            if !(low.residual_zero && high.residual_zero) {
                return Err(format!("nonzero residual at {lam}"));
            }
        }
        Ok("6 weights annihilated at both ranks with stable roots".into())
    })
}

/// Criterion 5: the reduced identities for columns, rows, and the two-block
/// family, with the row case doubling as full = reduced.
pub fn c5_reduced_identities(cfg: &SweepConfig) -> CriterionOutcome {
    run_one(5, "reduced identities", || {
        let box_weight = HighestWeight::new(vec![1]).expect("dominant");
        for k in 1..=3usize {
            let lam = HighestWeight::new(vec![1; k]).expect("dominant");
            let cert = verify_theorem5_reduced(&lam, cfg.mode).map_err(|e| e.to_string())?;
            let expected = vec![Rat::from_int(1), Rat::from_int(-(k as i64))];
            if cert.roots != expected {
                return Err(format!("column roots {:?} unexpected at k = {k}", cert.roots));
            }
        }
        for k in 1..=3i64 {
            let lam = HighestWeight::new(vec![k]).expect("dominant");
            let cert = verify_theorem5_reduced(&lam, cfg.mode).map_err(|e| e.to_string())?;
            let full: Vec<Rat> = lam
                .alpha_roots(2)
                .map_err(|e| e.to_string())?
                .into_iter()
                .map(Rat::from_int)
                .collect();
            if cert.roots != full {
                return Err(format!("row reduced identity differs from full at k = {k}"));
            }
        }
        for (p, q) in [(2, 1), (3, 1)] {
            let (lam, prescribed) = reduced_family_pq(p, q, 1, 1).map_err(|e| e.to_string())?;
            let derived = reduced_identity_roots(&box_weight, &lam);
            if prescribed != derived {
                return Err(format!("family prescription differs at p = {p}, q = {q}"));
            }
            let cert = verify_theorem5_reduced(&lam, cfg.mode).map_err(|e| e.to_string())?;
            if cert.roots != prescribed {
                return Err(format!("family certificate off at p = {p}, q = {q}"));
            }
        }
        Ok("columns k <= 3, rows k <= 3, family (2,1) and (3,1) all annihilate".into())
    })
}

/// Criterion 6: split-Casimir identities, full and reduced, with the
/// reduced roots a sub-multiset of the full ones.
pub fn c6_split_casimir(cfg: &SweepConfig) -> CriterionOutcome {
    run_one(6, "split Casimir identity", || {
        let pairs = [
            (vec![1], vec![2, 1]),
            (vec![1, 1], vec![1]),
            (vec![1, 1], vec![2]),
        ];
        for (a, b) in pairs {
            let lam = HighestWeight::new(a).expect("dominant");
            let mu = HighestWeight::new(b).expect("dominant");
            let full = verify_theorem6(&lam, &mu).map_err(|e| e.to_string())?;
            let reduced =
                verify_theorem6_reduced(&lam, &mu, cfg.mode).map_err(|e| e.to_string())?;
            for r in &reduced.roots {
                let need = reduced.roots.iter().filter(|x| *x == r).count();
                let have = full.roots.iter().filter(|x| *x == r).count();
                if have < need {
                    return Err(format!("reduced root {r} missing from the full set"));
                }
            }
            let n = lam.depth() + mu.depth();
            let recomputed = theorem6_full_roots(&lam, &mu, n);
            if full.roots != recomputed {
                return Err(format!("root bookkeeping drifted for {lam} (x) {mu}"));
            }
            // Reduced roots must all be doing work.
            let left = build_module(n, &lam).map_err(|e| e.to_string())?;
            let right = build_module(n, &mu).map_err(|e| e.to_string())?;
            let op = split_casimir(&left, &right, cfg.mode).map_err(|e| e.to_string())?;
            let needed = root_minimality(&op, &reduced.roots, cfg.mode);
            if let Some(pos) = needed.iter().position(|x| !x) {
                return Err(format!(
                    "degenerate coincidence: dropping reduced root {} of {lam} (x) {mu} \
                     still annihilates",
                    reduced.roots[pos]
                ));
            }
        }
        Ok("3 pairs annihilate fully and reduced, reduced subset minimal".into())
    })
}

/// Criterion 7: the commutator identity for matrix entries and the
/// stabilization of high diagonal entries.
pub fn c7_propositions(cfg: &SweepConfig, cache: &mut ModuleCache) -> CriterionOutcome {
    run_one(7, "entry commutators and tails", || {
        let shapes = [vec![1], vec![1, 1], vec![2]];
        let m_top = cfg.m_max.min(3);
        for parts in &shapes {
            let lam = HighestWeight::new(parts.clone()).expect("dominant");
            for n in [lam.depth().max(2), 3] {
                let rep = cache.get(n, &lam)?;
                let samples = prop1_sample(n, cfg.seed);
                for m in 1..=m_top {
                    let ok = verify_prop1(rep, m, &samples, cfg.mode)
                        .map_err(|e| e.to_string())?;
                    if !ok {
                        return Err(format!("entry commutator fails at {lam}, n = {n}, m = {m}"));
                    }
                }
            }
            let big = cache.get(lam.depth() + 3, &lam)?;
            for m in 2..=m_top.max(2) {
                let ok = verify_prop2(big, m, cfg.mode).map_err(|e| e.to_string())?;
                if !ok {
                    return Err(format!("diagonal tail fails at {lam}, m = {m}"));
                }
            }
        }
        Ok("3 weights, ranks to depth + 3, orders to 3".into())
    })
}

/// Criterion 8: generator matrices satisfy the commutation relations on
/// every cached module of verifiable size, and a corrupted module is caught.
pub fn c8_oracle_integrity(cfg: &SweepConfig, cache: &mut ModuleCache) -> CriterionOutcome {
    run_one(8, "oracle integrity", || {
        // Make sure there is something to check even on a bare cache.
        for (parts, n) in [(vec![2, 1], 3), (vec![1], 2)] {
            let lam = HighestWeight::new(parts).expect("dominant");
            cache.get(n, &lam)?;
        }
        let mut verified = 0usize;
        let mut injected = false;
        for rep in cache.iter() {
            if rep.dim() > 200 {
                continue;
            }
            if cfg.inject_fault && !injected && rep.n() >= 2 {
                // Deliberate corruption: the sweep must notice and fail.
                injected = true;
                let broken = rep
                    .with_perturbed_generator(1, 2, 0, 0, &Rat::one())
                    .map_err(|e| e.to_string())?;
                broken
                    .verify_commutation(cfg.mode)
                    .map_err(|e| format!("commutation: {e}"))?;
            } else {
                rep.verify_commutation(cfg.mode)
                    .map_err(|e| format!("commutation: {e}"))?;
            }
            verified += 1;
        }
        // Mutation sensitivity: a known-good module with one bumped entry
        // must fail the same check.
        let lam = HighestWeight::new(vec![2, 1]).expect("dominant");
        let clean = cache.get(3, &lam)?;
        let broken = clean
            .with_perturbed_generator(2, 3, 1, 0, &Rat::one())
            .map_err(|e| e.to_string())?;
        if broken.verify_commutation(cfg.mode).is_ok() {
            return Err("perturbed generator slipped past the commutation check".into());
        }
        let vec_rep = cache.get(2, &HighestWeight::new(vec![1]).expect("dominant"))?;
        let broken = vec_rep
            .with_perturbed_generator(1, 1, 1, 1, &Rat::one())
            .map_err(|e| e.to_string())?;
        if broken.verify_commutation(cfg.mode).is_ok() {
            return Err("perturbed diagonal slipped past the commutation check".into());
        }
        Ok(format!(
            "{verified} modules verified, 2 seeded mutations caught"
        ))
    })
}

/// Criterion 9: tensor decompositions audit, stabilize, and agree with the
/// one-box rule; the convolution oracle agrees with the tableau rule.
pub fn c9_tensor_layer(_cfg: &SweepConfig) -> CriterionOutcome {
    run_one(9, "tensor layer", || {
        let shapes = [vec![1], vec![2], vec![1, 1], vec![2, 1]];
        for a in &shapes {
            for b in &shapes {
                let lam = HighestWeight::new(a.clone()).expect("dominant");
                let mu = HighestWeight::new(b.clone()).expect("dominant");
                let d = lr_decompose(&lam, &mu);
                let n = lam.depth() + mu.depth();
                dimension_audit(&d, n).map_err(|e| e.to_string())?;
                dimension_audit(&d, n + 1).map_err(|e| e.to_string())?;
                if !stability_check(&lam, &mu).map_err(|e| e.to_string())? {
                    return Err(format!("decomposition unstable for {lam} (x) {mu}"));
                }
                let convolved = decompose_by_weights(&lam, &mu, n).map_err(|e| e.to_string())?;
                if convolved != d.summands {
                    return Err(format!("weight convolution differs for {lam} (x) {mu}"));
                }
            }
        }
        let grid = weight_grid(3, 5);
        let one = HighestWeight::new(vec![1]).expect("dominant");
        for lam in &grid {
            if pieri_vector(lam) != lr_decompose(&one, lam) {
                return Err(format!("one-box rule differs from the tableau rule at {lam}"));
            }
        }
        Ok(format!(
            "16 pairs audited and stable, one-box rule agrees on {} weights",
            grid.len()
        ))
    })
}

/// Runs the entire battery in order. Failures do not stop later criteria.
pub fn run_sweep(cfg: &SweepConfig) -> Vec<CriterionOutcome> {
    let mut cache = ModuleCache::default();
    vec![
        c1_formula_cross_validation(cfg, &mut cache),
        c2_quadratic_form(cfg),
        c3_finite_rank_traces(cfg, &mut cache),
        c4_characteristic_identity(cfg),
        c5_reduced_identities(cfg),
        c6_split_casimir(cfg),
        c7_propositions(cfg, &mut cache),
        c8_oracle_integrity(cfg, &mut cache),
        c9_tensor_layer(cfg),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shrunken_sweep_passes_every_criterion() {
        let cfg = SweepConfig {
            m_max: 2,
            ..SweepConfig::default()
        };
        let outcomes = run_sweep(&cfg);
        assert_eq!(outcomes.len(), 9);
        for o in &outcomes {
            assert!(o.passed, "{o}");
        }
        assert_eq!(
            outcomes.iter().map(|o| o.id).collect::<Vec<_>>(),
            (1..=9).collect::<Vec<_>>()
        );
    }

    #[test]
    fn injected_fault_is_caught_loudly() {
        let cfg = SweepConfig {
            m_max: 2,
            inject_fault: true,
            ..SweepConfig::default()
        };
        let c8 = {
            let mut cache = ModuleCache::default();
            c8_oracle_integrity(&cfg, &mut cache)
        };
        assert!(!c8.passed, "fault injection must surface: {c8}");
    }
}
