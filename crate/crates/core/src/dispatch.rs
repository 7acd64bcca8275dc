//! Hourly grid-connected dispatch without storage.
//!
//! PV serves the load first. A shortfall is bought from the grid up to the
//! purchase cap and whatever remains is unserved (the deficit). A surplus is
//! sold back without limit. Each hour satisfies
//! `p_sgen + p_gpurch + p_deficit = p_load + p_gsold`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hour length in the energy bookkeeping, h.
pub const STEP_HOURS: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DispatchError {
    #[error("hour {hour}: negative {quantity} {value} MW")]
    NegativeInput {
        hour: usize,
        quantity: &'static str,
        value: f64,
    },
    #[error("generation has {generation} hours but load has {load}")]
    LengthMismatch { generation: usize, load: usize },
    #[error("purchase cap must be a non-negative power, got {0}")]
    InvalidCap(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DispatchParams {
    /// Largest power that may be bought from the grid in any hour, MW.
    pub max_grid_purchase: f64,
}

impl Default for DispatchParams {
    fn default() -> Self {
        Self {
            max_grid_purchase: 1.0,
        }
    }
}

impl DispatchParams {
    pub fn new(max_grid_purchase: f64) -> Result<Self, DispatchError> {
        let p = Self { max_grid_purchase };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), DispatchError> {
        if self.max_grid_purchase >= 0.0 && self.max_grid_purchase.is_finite() {
            Ok(())
        } else {
            Err(DispatchError::InvalidCap(self.max_grid_purchase))
        }
    }
}

/// Power flows of one hour, MW.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HourDispatch {
    pub p_sgen: f64,
    pub p_load: f64,
    pub p_gpurch: f64,
    pub p_gsold: f64,
    pub p_deficit: f64,
}

impl HourDispatch {
    /// Supply minus demand including unserved load; zero up to rounding.
    pub fn balance_residual(&self) -> f64 {
        (self.p_sgen + self.p_gpurch + self.p_deficit) - (self.p_load + self.p_gsold)
    }
}

/// Annual energy totals, GWh.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyTotals {
    pub e_sgen: f64,
    pub e_gpurch: f64,
    pub e_load: f64,
    pub e_gsold: f64,
    pub e_deficit: f64,
}

impl EnergyTotals {
    fn add(&mut self, h: &HourDispatch) {
        self.e_sgen += h.p_sgen;
        self.e_gpurch += h.p_gpurch;
        self.e_load += h.p_load;
        self.e_gsold += h.p_gsold;
        self.e_deficit += h.p_deficit;
    }

    /// Converts accumulated MW-hours to GWh.
    fn finish(mut self) -> Self {
        let k = STEP_HOURS / 1000.0;
        self.e_sgen *= k;
        self.e_gpurch *= k;
        self.e_load *= k;
        self.e_gsold *= k;
        self.e_deficit *= k;
        self
    }

    /// Generated energy that served local load rather than being exported.
    pub fn e_self_consumed(&self) -> f64 {
        self.e_sgen - self.e_gsold
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DispatchResult {
    pub hourly: Vec<HourDispatch>,
    pub totals: EnergyTotals,
}

impl DispatchResult {
    pub fn write_csv<W: std::io::Write>(
        &self,
        timestamps: &[chrono::NaiveDateTime],
        writer: W,
    ) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["timestamp", "p_sgen_mw", "p_load_mw", "p_gpurch_mw", "p_gsold_mw", "p_deficit_mw"])?;
        for (ts, h) in timestamps.iter().zip(&self.hourly) {
            out.write_record([
                ts.format("%Y-%m-%dT%H:%M").to_string(),
                h.p_sgen.to_string(),
                h.p_load.to_string(),
                h.p_gpurch.to_string(),
                h.p_gsold.to_string(),
                h.p_deficit.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

fn dispatch_unchecked(p_sgen: f64, p_load: f64, cap: f64) -> HourDispatch {
    if p_sgen >= p_load {
        HourDispatch {
            p_sgen,
            p_load,
            p_gsold: p_sgen - p_load,
            ..HourDispatch::default()
        }
    } else {
        let shortfall = p_load - p_sgen;
        let p_gpurch = shortfall.min(cap);
        HourDispatch {
            p_sgen,
            p_load,
            p_gpurch,
            p_gsold: 0.0,
            p_deficit: shortfall - p_gpurch,
        }
    }
}

fn check_hour(hour: usize, p_sgen: f64, p_load: f64) -> Result<(), DispatchError> {
    for (quantity, value) in [("generation", p_sgen), ("load", p_load)] {
        if !(value >= 0.0) {
            return Err(DispatchError::NegativeInput { hour, quantity, value });
        }
    }
    Ok(())
}

/// Dispatch one hour.
pub fn dispatch_hour(p_sgen: f64, p_load: f64, params: &DispatchParams) -> Result<HourDispatch, DispatchError> {
    params.validate()?;
    check_hour(0, p_sgen, p_load)?;
    Ok(dispatch_unchecked(p_sgen, p_load, params.max_grid_purchase))
}

fn check_lengths(generation: usize, load: usize) -> Result<(), DispatchError> {
    if generation != load {
        return Err(DispatchError::LengthMismatch { generation, load });
    }
    Ok(())
}

/// Dispatch every hour and aggregate.
pub fn simulate_year(generation: &[f64], load: &[f64], params: &DispatchParams) -> Result<DispatchResult, DispatchError> {
    params.validate()?;
    check_lengths(generation.len(), load.len())?;
    let mut totals = EnergyTotals::default();
    let mut hourly = Vec::with_capacity(load.len());
    for (t, (&g, &l)) in generation.iter().zip(load).enumerate() {
        check_hour(t, g, l)?;
        let h = dispatch_unchecked(g, l, params.max_grid_purchase);
        totals.add(&h);
        hourly.push(h);
    }
    Ok(DispatchResult {
        hourly,
        totals: totals.finish(),
    })
}

/// Annual totals only, for inner optimization loops. Generation is supplied
/// lazily so callers can scale a per-panel profile without allocating.
pub fn annual_totals<I>(generation: I, load: &[f64], params: &DispatchParams) -> Result<EnergyTotals, DispatchError>
where
    I: ExactSizeIterator<Item = f64>,
{
    params.validate()?;
    check_lengths(generation.len(), load.len())?;
    let mut totals = EnergyTotals::default();
    for (t, (g, &l)) in generation.zip(load).enumerate() {
        check_hour(t, g, l)?;
        totals.add(&dispatch_unchecked(g, l, params.max_grid_purchase));
    }
    Ok(totals.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn cap(mw: f64) -> DispatchParams {
        DispatchParams::new(mw).unwrap()
    }

    #[test]
    fn surplus_is_sold() {
        let h = dispatch_hour(2.0, 1.0, &cap(1.0)).unwrap();
        assert_eq!((h.p_gsold, h.p_gpurch, h.p_deficit), (1.0, 0.0, 0.0));
    }

    #[test]
    fn shortfall_is_bought() {
        let h = dispatch_hour(0.5, 1.0, &cap(1.0)).unwrap();
        assert_eq!((h.p_gsold, h.p_gpurch, h.p_deficit), (0.0, 0.5, 0.0));
    }

    #[test]
    fn capped_purchase_leaves_deficit() {
        let h = dispatch_hour(0.2, 1.5, &cap(1.0)).unwrap();
        assert_eq!(h.p_gpurch, 1.0);
        assert_abs_diff_eq!(h.p_deficit, 0.3, epsilon = 1e-12);
        // 0.2 + 1.0 = 1.5 - 0.3
        assert_abs_diff_eq!(h.p_sgen + h.p_gpurch, h.p_load - h.p_deficit, epsilon = 1e-12);
        assert_abs_diff_eq!(h.balance_residual(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            dispatch_hour(-0.1, 1.0, &cap(1.0)),
            Err(DispatchError::NegativeInput { quantity: "generation", .. })
        ));
        assert!(dispatch_hour(0.1, f64::NAN, &cap(1.0)).is_err());
        assert!(DispatchParams::new(-1.0).is_err());
        assert!(matches!(
            simulate_year(&[1.0, 2.0], &[1.0], &cap(1.0)),
            Err(DispatchError::LengthMismatch { generation: 2, load: 1 })
        ));
        assert!(matches!(
            simulate_year(&[1.0, 2.0], &[1.0, -3.0], &cap(1.0)),
            Err(DispatchError::NegativeInput { hour: 1, .. })
        ));
    }

    #[test]
    fn zero_generation_buys_everything() {
        let load = vec![1.0; 8760];
        let r = simulate_year(&vec![0.0; 8760], &load, &cap(2.0)).unwrap();
        assert_eq!(r.totals.e_gpurch, r.totals.e_load);
        assert_eq!(r.totals.e_deficit, 0.0);
        assert_abs_diff_eq!(r.totals.e_load, 8.76, epsilon = 1e-9);
    }

    #[test]
    fn matched_generation_has_no_grid_flow() {
        let load: Vec<f64> = (0..168).map(|t| 0.5 + (t % 24) as f64 * 0.03).collect();
        let r = simulate_year(&load, &load, &cap(1.0)).unwrap();
        assert_eq!(r.totals.e_gpurch, 0.0);
        assert_eq!(r.totals.e_gsold, 0.0);
        assert_eq!(r.totals.e_deficit, 0.0);
    }

    #[test]
    fn totals_match_hourly_sums() {
        let gen: Vec<f64> = (0..100).map(|t| (t as f64 * 0.37).sin().abs() * 3.0).collect();
        let load: Vec<f64> = (0..100).map(|t| 1.0 + (t as f64 * 0.11).cos()).collect();
        let r = simulate_year(&gen, &load, &cap(0.7)).unwrap();
        let deficit: f64 = r.hourly.iter().map(|h| h.p_deficit).sum();
        assert_abs_diff_eq!(r.totals.e_deficit, deficit / 1000.0, epsilon = 1e-15);
        let fast = annual_totals(gen.iter().copied(), &load, &cap(0.7)).unwrap();
        assert_eq!(fast, r.totals);
    }

    proptest! {
        #[test]
        fn hourly_invariants(g in 0.0f64..10.0, l in 0.0f64..10.0, c in 0.0f64..10.0) {
            let h = dispatch_hour(g, l, &cap(c)).unwrap();
            prop_assert!(h.p_gpurch >= 0.0 && h.p_gsold >= 0.0 && h.p_deficit >= 0.0);
            prop_assert!(h.p_gpurch <= c);
            prop_assert!(h.p_gpurch == 0.0 || h.p_gsold == 0.0);
            prop_assert!(h.balance_residual().abs() <= 1e-9);
        }

        #[test]
        fn deficit_monotone(
            gen in proptest::collection::vec(0.0f64..3.0, 24),
            load in proptest::collection::vec(0.0f64..3.0, 24),
            c in 0.0f64..2.0, dc in 0.0f64..1.0, bump in 0.0f64..1.0,
        ) {
            let base = simulate_year(&gen, &load, &cap(c)).unwrap().totals;
            let more_cap = simulate_year(&gen, &load, &cap(c + dc)).unwrap().totals;
            prop_assert!(more_cap.e_deficit <= base.e_deficit);
            let more_gen: Vec<f64> = gen.iter().map(|g| g + bump).collect();
            let more = simulate_year(&more_gen, &load, &cap(c)).unwrap().totals;
            prop_assert!(more.e_deficit <= base.e_deficit);
            prop_assert!(more.e_gsold >= base.e_gsold);
        }
    }
}
