//! Run configuration, read from `workspace.cfg` (TOML). Every table and key
//! is optional; an absent file means all defaults.
//!
//! ```toml
//! [run]
//! grid_step = 900
//!
//! [preprocess]
//! align_max_gap = 1800
//! interpolate = true
//! interpolate_max_gap = 3600
//! outlier_filter = false
//! outlier_window = 5
//! outlier_threshold = 10.0
//!
//! [tickets]
//! min_duration_secs = 0
//! excerpt_padding = 2
//!
//! [report]
//! templates = []          # empty selects every stored template
//! ```

use std::fs;
use std::path::Path;

use navlang::tickets::TicketConfig;
use serde::Deserialize;

use crate::error::{Failure, Result};

pub const DEFAULT_GRID_STEP: u64 = 900;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Evaluation grid step in seconds.
    pub grid_step: u64,
    pub preprocess: PreprocessToggles,
    pub ticket: TicketConfig,
    /// Report templates to render; empty = all stored templates.
    pub templates: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PreprocessToggles {
    /// Longest raw-to-grid distance bridged during alignment, seconds.
    pub align_max_gap: u64,
    pub interpolate: bool,
    /// Longest missing span repaired by interpolation, seconds.
    pub interpolate_max_gap: u64,
    /// The moving-median filter is opt-in: its threshold is in sensor units
    /// and a wrong one silently blanks good data.
    pub outlier_filter: bool,
    pub outlier_window: usize,
    pub outlier_threshold: f64,
}

impl RunConfig {
    fn defaults_for(step: u64) -> RunConfig {
        RunConfig {
            grid_step: step,
            preprocess: PreprocessToggles {
                align_max_gap: 2 * step,
                interpolate: true,
                interpolate_max_gap: 4 * step,
                outlier_filter: false,
                outlier_window: 5,
                outlier_threshold: 10.0,
            },
            ticket: TicketConfig::default(),
            templates: Vec::new(),
        }
    }

    /// Read the configuration: the explicit `--config` file, else the
    /// workspace's `workspace.cfg`, else defaults.
    pub fn load(explicit: Option<&Path>, fallback: &Path) -> Result<RunConfig> {
        let path = match explicit {
            Some(p) => p,
            None if fallback.exists() => fallback,
            None => return Ok(RunConfig::defaults_for(DEFAULT_GRID_STEP)),
        };
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))?;
        let raw: RawConfig = toml::from_str(&text)
            .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
        RunConfig::from_raw(raw).map_err(|msg| Failure::validation(format!("{}: {msg}", path.display())))
    }

    fn from_raw(raw: RawConfig) -> std::result::Result<RunConfig, String> {
        let step = raw.run.grid_step;
        if step == 0 {
            return Err("grid_step must be positive".into());
        }
        let mut cfg = RunConfig::defaults_for(step);
        let d = &cfg.preprocess;
        cfg.preprocess = PreprocessToggles {
            align_max_gap: raw.preprocess.align_max_gap.unwrap_or(d.align_max_gap),
            interpolate: raw.preprocess.interpolate,
            interpolate_max_gap: raw
                .preprocess
                .interpolate_max_gap
                .unwrap_or(d.interpolate_max_gap),
            outlier_filter: raw.preprocess.outlier_filter,
            outlier_window: raw.preprocess.outlier_window,
            outlier_threshold: raw.preprocess.outlier_threshold,
        };
        cfg.ticket = TicketConfig {
            min_duration_secs: raw.tickets.min_duration_secs,
            excerpt_padding: raw.tickets.excerpt_padding,
        };
        cfg.templates = raw.report.templates;
        Ok(cfg)
    }
}

// Raw TOML shape; unknown keys are rejected so typos surface as errors.

#[derive(Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawConfig {
    run: RunSection,
    preprocess: PreprocessSection,
    tickets: TicketsSection,
    report: ReportSection,
}

#[derive(Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunSection {
    grid_step: u64,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection { grid_step: DEFAULT_GRID_STEP }
    }
}

#[derive(Deserialize)]
#[serde(default, deny_unknown_fields)]
struct PreprocessSection {
    align_max_gap: Option<u64>,
    interpolate: bool,
    interpolate_max_gap: Option<u64>,
    outlier_filter: bool,
    outlier_window: usize,
    outlier_threshold: f64,
}

impl Default for PreprocessSection {
    fn default() -> Self {
        PreprocessSection {
            align_max_gap: None,
            interpolate: true,
            interpolate_max_gap: None,
            outlier_filter: false,
            outlier_window: 5,
            outlier_threshold: 10.0,
        }
    }
}

#[derive(Deserialize)]
#[serde(default, deny_unknown_fields)]
struct TicketsSection {
    min_duration_secs: u64,
    excerpt_padding: usize,
}

impl Default for TicketsSection {
    fn default() -> Self {
        TicketsSection { min_duration_secs: 0, excerpt_padding: 2 }
    }
}

#[derive(Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ReportSection {
    templates: Vec<String>,
}
