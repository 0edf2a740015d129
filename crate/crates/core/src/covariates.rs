//! Indicator designs shared by the offensive and defensive adjustments.
//!
//! Categorical covariates are treatment coded. The baseline level is the
//! most frequent one (ties go to the smallest level), so the intercept is
//! the mean of the largest group and the other coefficients are contrasts
//! against it.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::numerics::DesignBuilder;
use crate::pbp::{platoon_advantage, PlateAppearance};
use crate::Design;

/// Sorted distinct levels and the modal baseline.
pub fn levels_with_baseline<L: Ord + Clone>(observed: &[L]) -> (Vec<L>, Option<L>) {
    let mut counts: BTreeMap<&L, usize> = BTreeMap::new();
    for o in observed {
        *counts.entry(o).or_default() += 1;
    }
    let mut baseline: Option<(&L, usize)> = None;
    for (&level, &n) in &counts {
        if baseline.is_none_or(|(_, best)| n > best) {
            baseline = Some((level, n));
        }
    }
    let base = baseline.map(|(l, _)| l.clone());
    (counts.into_keys().cloned().collect(), base)
}

/// Appends treatment-coded indicators for `observed` to `builder`.
pub fn add_categorical<L, F>(
    builder: DesignBuilder<f64>,
    prefix: &str,
    observed: &[L],
    label: F,
) -> DesignBuilder<f64>
where
    L: Ord + Clone,
    F: Fn(&L) -> String,
{
    let (levels, baseline) = levels_with_baseline(observed);
    let labelled: Vec<(L, String)> = levels.into_iter().map(|l| {
        let s = label(&l);
        (l, s)
    }).collect();
    builder.indicators(prefix, observed, &labelled, baseline.as_ref())
}

/// Intercept, ballpark indicators and the platoon indicator, one row per
/// plate appearance.
pub fn park_platoon_design(pas: &[PlateAppearance]) -> Result<Design> {
    let parks: Vec<&str> = pas.iter().map(|p| p.ballpark_id.as_str()).collect();
    let platoon: Vec<f64> = pas
        .iter()
        .map(|p| f64::from(u8::from(platoon_advantage(p.batter_hand, p.pitcher_hand))))
        .collect();
    let b = DesignBuilder::new(pas.len()).intercept();
    let b = add_categorical(b, "park:", &parks, |s| s.to_string());
    b.column("platoon", platoon).build()
}

/// Intercept and ballpark indicators for arbitrary rows.
pub fn park_design(parks: &[&str]) -> Result<Design> {
    let b = DesignBuilder::new(parks.len()).intercept();
    add_categorical(b, "park:", parks, |s| s.to_string()).build()
}
