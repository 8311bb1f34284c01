use serde::{Deserialize, Serialize};

/// Running account of the corruption injected so far.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorruptionLedger {
    budget: f64,
    spent: f64,
}

impl CorruptionLedger {
    pub fn new(budget: f64) -> Self {
        assert!(budget >= 0.0, "corruption budget must be nonnegative");
        Self { budget, spent: 0.0 }
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn spent(&self) -> f64 {
        self.spent
    }

    pub fn remaining(&self) -> f64 {
        self.budget - self.spent
    }

    /// Books `amount` if it fits in the remaining budget.
    fn try_spend(&mut self, amount: f64) -> bool {
        if self.spent + amount <= self.budget {
            self.spent += amount;
            true
        } else {
            false
        }
    }
}

/// Built-in attackers against a stochastic loss stream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum AttackPolicy {
    /// Raise the best arm's loss to 1 from the first round on, until the
    /// budget runs out.
    Frontload,
    /// Make `target` look best (loss 0) and the best arm look bad (loss 1)
    /// while the budget lasts.
    TargetedSwap { target: usize },
}

/// Applies `policy` to one round of clean losses.
///
/// The ledger is charged `max_i |corrupted_i - clean_i|`. A round whose
/// charge would overrun the budget is left clean.
pub fn corruption_attack(
    policy: AttackPolicy,
    clean: &[f64],
    best_arm: usize,
    ledger: &mut CorruptionLedger,
) -> Vec<f64> {
    let mut corrupted = clean.to_vec();
    match policy {
        AttackPolicy::Frontload => corrupted[best_arm] = 1.0,
        AttackPolicy::TargetedSwap { target } => {
            if target != best_arm && target < clean.len() {
                corrupted[target] = 0.0;
                corrupted[best_arm] = 1.0;
            }
        }
    }
    let charge = clean
        .iter()
        .zip(&corrupted)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if charge > 0.0 && ledger.try_spend(charge) {
        corrupted
    } else {
        clean.to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_budget_is_identity() {
        let mut ledger = CorruptionLedger::new(0.0);
        for policy in [AttackPolicy::Frontload, AttackPolicy::TargetedSwap { target: 1 }] {
            let clean = [0.0, 1.0, 0.3];
            assert_eq!(corruption_attack(policy, &clean, 0, &mut ledger), clean.to_vec());
        }
        assert_eq!(ledger.spent(), 0.0);
    }

    #[test]
    fn frontload_corrupts_exactly_the_first_rounds() {
        let mut ledger = CorruptionLedger::new(5.0);
        let corrupted: Vec<bool> = (0..10)
            .map(|_| {
                let clean = [0.0, 0.0];
                corruption_attack(AttackPolicy::Frontload, &clean, 0, &mut ledger) != clean
            })
            .collect();
        assert_eq!(corrupted, [vec![true; 5], vec![false; 5]].concat());
        assert_eq!(ledger.spent(), 5.0);
    }

    #[test]
    fn partial_round_left_clean() {
        let mut ledger = CorruptionLedger::new(1.5);
        let clean = [0.0, 0.5];
        assert_ne!(corruption_attack(AttackPolicy::Frontload, &clean, 0, &mut ledger), clean);
        assert_eq!(corruption_attack(AttackPolicy::Frontload, &clean, 0, &mut ledger), clean);
        assert_eq!(ledger.spent(), 1.0);
    }

    #[test]
    fn targeted_swap_flips_target_and_best() {
        let mut ledger = CorruptionLedger::new(10.0);
        let out = corruption_attack(AttackPolicy::TargetedSwap { target: 2 }, &[0.4, 0.5, 0.8], 0, &mut ledger);
        assert_eq!(out, vec![1.0, 0.5, 0.0]);
        assert!((ledger.spent() - 0.8).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn spent_never_exceeds_budget(
            budget in 0.0f64..50.0,
            swap in any::<bool>(),
            target in 0usize..4,
            rows in prop::collection::vec(prop::collection::vec(0.0f64..=1.0, 4), 1..200),
        ) {
            let policy = if swap { AttackPolicy::TargetedSwap { target } } else { AttackPolicy::Frontload };
            let mut ledger = CorruptionLedger::new(budget);
            let mut last = 0.0;
            for row in &rows {
                let out = corruption_attack(policy, row, 1, &mut ledger);
                prop_assert!(out.iter().all(|l| (0.0..=1.0).contains(l)));
                prop_assert!(ledger.spent() >= last);
                prop_assert!(ledger.spent() <= ledger.budget());
                last = ledger.spent();
            }
        }
    }
}
