use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{group_members, Dataset};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitMode {
    /// Observation-level sampling, ignoring groups.
    Random,
    /// Whole groups assigned at random.
    GroupedRandom,
    /// Grouped, with the lowest and highest group-mean target groups in train.
    GroupedInterpolation,
    /// Grouped, with the highest group-mean target group in test. Negate the
    /// targets to hold out the low end instead.
    GroupedExtrapolation,
    /// Listed groups in test, the rest grouped-random.
    ForcedTestGroups,
}

impl SplitMode {
    pub fn is_grouped(self) -> bool {
        self != SplitMode::Random
    }
}

fn default_train_fraction() -> f64 {
    0.7
}

/// How to split. For grouped modes `train_fraction` is matched on the number
/// of groups, so the realized observation fraction depends on group sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub mode: SplitMode,
    #[serde(default = "default_train_fraction")]
    pub train_fraction: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forced_groups: Option<Vec<String>>,
    #[serde(default)]
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(mode: SplitMode, seed: u64) -> Self {
        SplitSpec {
            mode,
            train_fraction: default_train_fraction(),
            forced_groups: None,
            seed,
        }
    }

    pub fn forced(groups: Vec<String>, seed: u64) -> Self {
        SplitSpec {
            forced_groups: Some(groups),
            ..SplitSpec::new(SplitMode::ForcedTestGroups, seed)
        }
    }

    pub fn with_train_fraction(mut self, f: f64) -> Self {
        self.train_fraction = f;
        self
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        SplitSpec { seed, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::invalid("train_fraction", format!("must lie in (0, 1), got {}", self.train_fraction)));
        }
        match (self.mode, &self.forced_groups) {
            (SplitMode::ForcedTestGroups, None) => {
                Err(Error::invalid("forced_groups", "required for forced_test_groups"))
            }
            (SplitMode::ForcedTestGroups, Some(g)) if g.is_empty() => {
                Err(Error::invalid("forced_groups", "must list at least one group"))
            }
            (SplitMode::ForcedTestGroups, Some(_)) => Ok(()),
            (_, Some(_)) => Err(Error::invalid("forced_groups", "only allowed for forced_test_groups")),
            (_, None) => Ok(()),
        }
    }
}

/// Disjoint, covering, nonempty index sets, each sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitResult {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

impl SplitResult {
    pub fn n_train(&self) -> usize {
        self.train.len()
    }

    pub fn n_test(&self) -> usize {
        self.test.len()
    }
}

pub fn split(ds: &Dataset, spec: &SplitSpec) -> Result<SplitResult> {
    split_indices(ds.y().as_slice(), ds.groups(), spec)
}

/// Splits from raw targets and labels.
pub fn split_indices(targets: &[f64], groups: &[String], spec: &SplitSpec) -> Result<SplitResult> {
    spec.validate()?;
    let m = targets.len();
    if groups.len() != m {
        return Err(Error::Dimension {
            context: "group labels",
            expected: m,
            found: groups.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    if spec.mode == SplitMode::Random {
        if m < 2 {
            return Err(Error::Split(format!("random split needs at least 2 observations, got {m}")));
        }
        let n_train = (spec.train_fraction * m as f64).round().clamp(1.0, (m - 1) as f64) as usize;
        let mut idx: Vec<usize> = (0..m).collect();
        idx.shuffle(&mut rng);
        return Ok(finish(idx[..n_train].to_vec(), idx[n_train..].to_vec()));
    }

    let members = group_members(groups);
    let labels: Vec<&str> = members.keys().copied().collect();
    let g = labels.len();
    if g < 2 {
        return Err(Error::Split(format!("grouped splits need at least 2 groups, found {g}")));
    }
    let group_mean = |label: &str| {
        let rows = &members[label];
        rows.iter().map(|&i| targets[i]).sum::<f64>() / rows.len() as f64
    };
    let target_count = |lo: usize, hi: usize| (spec.train_fraction * g as f64).round().clamp(lo as f64, hi as f64) as usize;

    // (forced into train, forced into test)
    let (forced_train, forced_test): (Vec<&str>, Vec<&str>) = match spec.mode {
        SplitMode::GroupedRandom => (vec![], vec![]),
        SplitMode::GroupedInterpolation => {
            if g < 3 {
                return Err(Error::Split(format!("interpolation split needs at least 3 groups, found {g}")));
            }
            let (lo, hi) = extreme_groups(&labels, group_mean);
            (vec![lo, hi], vec![])
        }
        SplitMode::GroupedExtrapolation => {
            let (_, hi) = extreme_groups(&labels, group_mean);
            (vec![], vec![hi])
        }
        SplitMode::ForcedTestGroups => {
            let wanted: BTreeSet<&str> = spec.forced_groups.iter().flatten().map(String::as_str).collect();
            if let Some(missing) = wanted.iter().find(|w| !members.contains_key(*w)) {
                return Err(Error::Split(format!("forced group `{missing}` is not present")));
            }
            if wanted.len() >= g {
                return Err(Error::Split("forced groups leave no group for training".into()));
            }
            (vec![], wanted.into_iter().collect())
        }
        SplitMode::Random => unreachable!(),
    };

    let mut free: Vec<&str> = labels
        .iter()
        .copied()
        .filter(|l| !forced_train.contains(l) && !forced_test.contains(l))
        .collect();
    free.shuffle(&mut rng);
    let lo = forced_train.len().max(1);
    let hi = g - forced_test.len().max(1);
    let n_train_groups = target_count(lo, hi);
    let extra = n_train_groups - forced_train.len();

    let train_labels: BTreeSet<&str> = forced_train.iter().copied().chain(free[..extra].iter().copied()).collect();
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (label, rows) in &members {
        if train_labels.contains(label) {
            train.extend_from_slice(rows);
        } else {
            test.extend_from_slice(rows);
        }
    }
    Ok(finish(train, test))
}

/// Labels with the smallest and largest group-mean target. Ties go to the
/// first label for the minimum and the last for the maximum, so the two
/// differ whenever there are two or more labels.
fn extreme_groups<'a>(labels: &[&'a str], mean: impl Fn(&str) -> f64) -> (&'a str, &'a str) {
    let mut lo = (labels[0], mean(labels[0]));
    let mut hi = lo;
    for &l in &labels[1..] {
        let v = mean(l);
        if v < lo.1 {
            lo = (l, v);
        }
        if v >= hi.1 {
            hi = (l, v);
        }
    }
    (lo.0, hi.0)
}

fn finish(mut train: Vec<usize>, mut test: Vec<usize>) -> SplitResult {
    train.sort_unstable();
    test.sort_unstable();
    SplitResult { train, test }
}
