//! Flat key-value experiment configuration.
//!
//! Format: one `key = value` per line, `#` comments, blank lines ignored.
//! Every key is optional; absent keys take the built-in defaults below, so
//! an empty file is the default deployment. Unknown keys are parse errors
//! (they are almost always typos), reported with their line number.
//!
//! ```text
//! n_elements = 17            # odd element count (2N+1)
//! carriers_per_element = 7
//! f0_hz = 10e9
//! delta_f_hz = 2e3
//! p = 1
//! ps = 1
//! snr_db = 10                # fixed-SNR experiments; sets the noise floor
//! beta1 = 0.9
//! alpha = 0.5                # shared transform order (cooperative scheme)
//! mv = 1,2,3,4
//! nv = 5,6,7,8
//! bob1.range_km = 150
//! bob1.angle_deg = 50
//! bob1.modulation = bpsk     # bpsk | qpsk | 8psk
//! bob1.alpha = 0.5           # per-path order (independent scheme)
//! bob1.q = 3                 # per-path transform block length
//! eve1.range_km = 150
//! eve1.angle_deg = 50
//! eve1.target = 1            # which Bob this observer is graded against
//! snr_grid_db = 0:2:12       # list (a,b,c) or range (start:step:stop)
//! min_symbols = 200000
//! min_errors = 100
//! max_symbols = 2000000
//! angle_points = 721
//! range_points = 200
//! location_cases = 1:0;0:2;1:2   # delta-range km : delta-angle deg
//! dalpha_grid = 0.01,0.05
//! rate_grid = 1:1:8
//! probe_target = 1
//! robust_bob = 2
//! leaked_eves = true
//! eve_preset = many9         # append the nine scattered observers
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use super::{ExperimentKind, ExperimentSpec, ProbeMode, Scheme, SweepGrid};
use crate::chains::{BobProfile, Scenario};
use crate::error::{Error, Result};
use crate::fda::{FdaConfig, Location};
use crate::precoding::AnDmConfig;
use crate::psk::PskAlphabet;
use crate::wfrft::WfrftParams;

/// The built-in default deployment: a 17-element, 7-carrier array at 10 GHz
/// with 2 kHz increments serving three receivers at (150 km, 50 deg),
/// (180 km, -40 deg), (260 km, 0 deg) with BPSK/QPSK/8PSK, transform orders
/// 0.5/1/1.5 over blocks of 3/4/5, integer vectors [1,2,3,4]/[5,6,7,8],
/// two observers (one sitting exactly on the first receiver), unit transmit
/// power at 10 dB SNR, and a 0.9 amplitude split for the AN baseline.
pub fn default_scenario() -> Scenario {
    let fda = FdaConfig::new(8, 7, 10.0e9, 2.0e3, 1.0).expect("default geometry is valid");
    let mv = [1i64, 2, 3, 4];
    let nv = [5i64, 6, 7, 8];
    let bobs = vec![
        BobProfile {
            location: Location::from_degrees(150.0e3, 50.0).unwrap(),
            alphabet: PskAlphabet::bpsk(),
            wfrft: WfrftParams::multi(0.5, mv, nv),
            block_len: 3,
        },
        BobProfile {
            location: Location::from_degrees(180.0e3, -40.0).unwrap(),
            alphabet: PskAlphabet::qpsk(),
            wfrft: WfrftParams::multi(1.0, mv, nv),
            block_len: 4,
        },
        BobProfile {
            location: Location::from_degrees(260.0e3, 0.0).unwrap(),
            alphabet: PskAlphabet::psk8(),
            wfrft: WfrftParams::multi(1.5, mv, nv),
            block_len: 5,
        },
    ];
    Scenario {
        fda,
        bobs,
        eves: vec![
            Location::from_degrees(150.0e3, 50.0).unwrap(),
            Location::from_degrees(220.0e3, -20.0).unwrap(),
        ],
        ps: 1.0,
        noise_var: 0.1,
        an_baseline: AnDmConfig::new(0.9).unwrap(),
        coop_wfrft: WfrftParams::multi(0.5, mv, nv),
    }
}

/// The nine scattered observer locations used by the many-eavesdropper
/// secrecy comparison.
pub fn many_eves_preset() -> Vec<Location> {
    [
        (259.0, 107.0),
        (221.0, -106.0),
        (298.0, -138.0),
        (157.0, 41.0),
        (159.0, -69.0),
        (182.0, -34.0),
        (247.0, 8.0),
        (229.0, 1.0),
        (188.0, 10.0),
    ]
    .iter()
    .map(|&(r_km, a_deg)| Location::from_degrees(r_km * 1e3, a_deg).expect("preset is valid"))
    .collect()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Parsed key-value entries with line numbers, insertion order preserved
/// per key family via BTreeMap iteration where it matters.
struct KvFile {
    entries: BTreeMap<String, (String, usize)>,
}

fn parse_kv(text: &str) -> Result<KvFile> {
    let mut entries = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected 'key = value', got '{line}'"),
            });
        };
        let key = key.trim().to_ascii_lowercase();
        let value = value.trim().to_string();
        if key.is_empty() || value.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                msg: "empty key or value".into(),
            });
        }
        if entries.insert(key.clone(), (value, line_no)).is_some() {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("duplicate key '{key}'"),
            });
        }
    }
    Ok(KvFile { entries })
}

impl KvFile {
    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        self.entries.remove(key)
    }

    fn f64(&mut self, key: &str) -> Result<Option<f64>> {
        match self.take(key) {
            None => Ok(None),
            Some((v, line)) => v.parse::<f64>().map(Some).map_err(|_| Error::Parse {
                line,
                msg: format!("{key}: expected a number, got '{v}'"),
            }),
        }
    }

    fn u64(&mut self, key: &str) -> Result<Option<u64>> {
        match self.take(key) {
            None => Ok(None),
            Some((v, line)) => v.parse::<u64>().map(Some).map_err(|_| Error::Parse {
                line,
                msg: format!("{key}: expected an unsigned integer, got '{v}'"),
            }),
        }
    }

    fn bool(&mut self, key: &str) -> Result<Option<bool>> {
        match self.take(key) {
            None => Ok(None),
            Some((v, line)) => match v.as_str() {
                "true" | "yes" | "1" => Ok(Some(true)),
                "false" | "no" | "0" => Ok(Some(false)),
                _ => Err(Error::Parse {
                    line,
                    msg: format!("{key}: expected true/false, got '{v}'"),
                }),
            },
        }
    }

    /// Comma list `a,b,c` or inclusive range `start:step:stop`.
    fn grid(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        let Some((v, line)) = self.take(key) else {
            return Ok(None);
        };
        let bad = |msg: String| Error::Parse { line, msg };
        if v.contains(':') {
            let parts: Vec<&str> = v.split(':').collect();
            if parts.len() != 3 {
                return Err(bad(format!("{key}: range must be start:step:stop")));
            }
            let nums: Vec<f64> = parts
                .iter()
                .map(|p| p.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad(format!("{key}: non-numeric range bound")))?;
            let (start, step, stop) = (nums[0], nums[1], nums[2]);
            if step <= 0.0 || stop < start {
                return Err(bad(format!("{key}: need step > 0 and stop >= start")));
            }
            let mut out = Vec::new();
            let mut i = 0u64;
            loop {
                let x = start + step * i as f64;
                if x > stop + 1e-9 {
                    break;
                }
                out.push(x);
                i += 1;
            }
            Ok(Some(out))
        } else {
            let out: Vec<f64> = v
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad(format!("{key}: non-numeric list entry")))?;
            if out.is_empty() {
                return Err(bad(format!("{key}: empty list")));
            }
            Ok(Some(out))
        }
    }

    fn int4(&mut self, key: &str) -> Result<Option<[i64; 4]>> {
        let Some((v, line)) = self.take(key) else {
            return Ok(None);
        };
        let nums: Vec<i64> = v
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse {
                line,
                msg: format!("{key}: expected four integers"),
            })?;
        if nums.len() != 4 {
            return Err(Error::Parse {
                line,
                msg: format!("{key}: expected exactly four integers, got {}", nums.len()),
            });
        }
        Ok(Some([nums[0], nums[1], nums[2], nums[3]]))
    }

    /// `dr:dtheta;dr:dtheta` pair list.
    fn pairs(&mut self, key: &str) -> Result<Option<Vec<(f64, f64)>>> {
        let Some((v, line)) = self.take(key) else {
            return Ok(None);
        };
        let mut out = Vec::new();
        for item in v.split(';') {
            let Some((a, b)) = item.split_once(':') else {
                return Err(Error::Parse {
                    line,
                    msg: format!("{key}: expected 'dr:dtheta' pairs separated by ';'"),
                });
            };
            let pa = a.trim().parse::<f64>();
            let pb = b.trim().parse::<f64>();
            match (pa, pb) {
                (Ok(x), Ok(y)) => out.push((x, y)),
                _ => {
                    return Err(Error::Parse {
                        line,
                        msg: format!("{key}: non-numeric pair '{item}'"),
                    })
                }
            }
        }
        Ok(Some(out))
    }

    fn reject_unknown(&self) -> Result<()> {
        if let Some((key, (_, line))) = self.entries.iter().next() {
            return Err(Error::Parse {
                line: *line,
                msg: format!("unknown key '{key}'"),
            });
        }
        Ok(())
    }
}

fn alphabet_from_name(name: &str, key: &str, line: usize) -> Result<PskAlphabet> {
    match name.to_ascii_lowercase().as_str() {
        "bpsk" | "2" => Ok(PskAlphabet::bpsk()),
        "qpsk" | "4" => Ok(PskAlphabet::qpsk()),
        "8psk" | "8" => Ok(PskAlphabet::psk8()),
        other => Err(Error::Parse {
            line,
            msg: format!("{key}: unknown modulation '{other}'"),
        }),
    }
}

/// Scenario plus harness-level settings pulled from one config file.
pub struct ParsedConfig {
    pub scenario: Scenario,
    pub snr_grid_db: Option<Vec<f64>>,
    pub min_symbols: Option<u64>,
    pub min_errors: Option<u64>,
    pub max_symbols: Option<u64>,
    pub sweep_overrides: SweepOverrides,
    pub probe_target: Option<usize>,
    pub robust_bob: Option<usize>,
    pub leaked_eves: Option<bool>,
    pub eve_targets: Vec<usize>,
}

#[derive(Default)]
pub struct SweepOverrides {
    pub angle_points: Option<usize>,
    pub angle_min_deg: Option<f64>,
    pub angle_max_deg: Option<f64>,
    pub range_points: Option<usize>,
    pub range_min_km: Option<f64>,
    pub range_max_km: Option<f64>,
    pub location_cases: Option<Vec<(f64, f64)>>,
    pub dalpha_grid: Option<Vec<f64>>,
    pub rate_grid: Option<Vec<f64>>,
}

pub fn parse_config(text: &str) -> Result<ParsedConfig> {
    let mut kv = parse_kv(text)?;
    let mut sc = default_scenario();

    // Geometry and frequency plan.
    let n_elements = kv.u64("n_elements")?;
    let carriers = kv.u64("carriers_per_element")?;
    let f0 = kv.f64("f0_hz")?;
    let delta_f = kv.f64("delta_f_hz")?;
    let p = kv.f64("p")?;
    let d_m = kv.f64("d_m")?;
    let t_obs = kv.f64("t_obs_s")?;
    if n_elements.is_some()
        || carriers.is_some()
        || f0.is_some()
        || delta_f.is_some()
        || p.is_some()
        || d_m.is_some()
        || t_obs.is_some()
    {
        let n_el = n_elements.unwrap_or(sc.fda.n_elements() as u64);
        if n_el % 2 == 0 || n_el == 0 {
            return Err(Error::Config(format!(
                "n_elements: must be odd and positive, got {n_el}"
            )));
        }
        let mut fda = FdaConfig::new(
            ((n_el - 1) / 2) as usize,
            carriers.unwrap_or(sc.fda.n_carriers as u64) as usize,
            f0.unwrap_or(sc.fda.f0),
            delta_f.unwrap_or(sc.fda.delta_f),
            p.unwrap_or(sc.fda.p),
        )
        .map_err(|e| Error::Config(format!("array geometry: {e}")))?;
        if let Some(d) = d_m {
            fda = fda
                .with_spacing(d)
                .map_err(|e| Error::Config(format!("d_m: {e}")))?;
        }
        if let Some(t) = t_obs {
            fda = fda.with_t_obs(t);
        }
        sc.fda = fda;
    }

    // Powers.
    if let Some(ps) = kv.f64("ps")? {
        sc.ps = ps;
    }
    if let Some(snr_db) = kv.f64("snr_db")? {
        sc.noise_var = sc.ps / 10.0_f64.powf(snr_db / 10.0);
    }
    if let Some(nv) = kv.f64("noise_var")? {
        sc.noise_var = nv;
    }
    if let Some(b1) = kv.f64("beta1")? {
        sc.an_baseline = AnDmConfig::new(b1).map_err(|e| Error::Config(format!("beta1: {e}")))?;
    }

    // Transform parameters.
    let mv = kv.int4("mv")?.unwrap_or(sc.coop_wfrft.m_vec);
    let nv = kv.int4("nv")?.unwrap_or(sc.coop_wfrft.n_vec);
    sc.coop_wfrft.m_vec = mv;
    sc.coop_wfrft.n_vec = nv;
    for b in sc.bobs.iter_mut() {
        b.wfrft.m_vec = mv;
        b.wfrft.n_vec = nv;
    }
    if let Some(a) = kv.f64("alpha")? {
        sc.coop_wfrft.alpha = a;
    }

    // Receivers: bob1..bob9, eve1..eve9. Beyond the defaults a new entry
    // needs at least a location.
    for i in 1..=9usize {
        let prefix = format!("bob{i}");
        let range = kv.f64(&format!("{prefix}.range_km"))?;
        let angle = kv.f64(&format!("{prefix}.angle_deg"))?;
        let modulation = kv.take(&format!("{prefix}.modulation"));
        let alpha = kv.f64(&format!("{prefix}.alpha"))?;
        let q = kv.u64(&format!("{prefix}.q"))?;
        let any = range.is_some()
            || angle.is_some()
            || modulation.is_some()
            || alpha.is_some()
            || q.is_some();
        if !any {
            continue;
        }
        if i > sc.bobs.len() + 1 {
            return Err(Error::Config(format!(
                "{prefix}: receivers must be contiguous (bob{} missing)",
                sc.bobs.len() + 1
            )));
        }
        if i > sc.bobs.len() {
            // A brand-new receiver: location is mandatory.
            let (Some(r), Some(a)) = (range, angle) else {
                return Err(Error::Config(format!(
                    "{prefix}: new receiver needs {prefix}.range_km and {prefix}.angle_deg"
                )));
            };
            let location = Location::from_degrees(r * 1e3, a)
                .map_err(|e| Error::Config(format!("{prefix}.range_km/angle_deg: {e}")))?;
            sc.bobs.push(BobProfile {
                location,
                alphabet: PskAlphabet::qpsk(),
                wfrft: WfrftParams::multi(0.5, mv, nv),
                block_len: 4,
            });
        }
        let bob = &mut sc.bobs[i - 1];
        if range.is_some() || angle.is_some() {
            let r = range.map(|v| v * 1e3).unwrap_or(bob.location.range);
            let a = angle.unwrap_or(bob.location.angle.to_degrees());
            bob.location = Location::from_degrees(r, a)
                .map_err(|e| Error::Config(format!("{prefix}.range_km/angle_deg: {e}")))?;
        }
        if let Some((name, line)) = modulation {
            bob.alphabet = alphabet_from_name(&name, &format!("{prefix}.modulation"), line)?;
        }
        if let Some(a) = alpha {
            bob.wfrft.alpha = a;
        }
        if let Some(q) = q {
            if q == 0 {
                return Err(Error::Config(format!("{prefix}.q: must be at least 1")));
            }
            bob.block_len = q as usize;
        }
    }

    let mut eve_targets: Vec<Option<usize>> = vec![None; sc.eves.len()];
    for i in 1..=9usize {
        let prefix = format!("eve{i}");
        let range = kv.f64(&format!("{prefix}.range_km"))?;
        let angle = kv.f64(&format!("{prefix}.angle_deg"))?;
        let target = kv.u64(&format!("{prefix}.target"))?;
        if range.is_none() && angle.is_none() && target.is_none() {
            continue;
        }
        if i > sc.eves.len() + 1 {
            return Err(Error::Config(format!(
                "{prefix}: observers must be contiguous (eve{} missing)",
                sc.eves.len() + 1
            )));
        }
        if i > sc.eves.len() {
            let (Some(r), Some(a)) = (range, angle) else {
                return Err(Error::Config(format!(
                    "{prefix}: new observer needs {prefix}.range_km and {prefix}.angle_deg"
                )));
            };
            sc.eves.push(
                Location::from_degrees(r * 1e3, a)
                    .map_err(|e| Error::Config(format!("{prefix}.range_km/angle_deg: {e}")))?,
            );
            eve_targets.push(None);
        } else if range.is_some() || angle.is_some() {
            let old = sc.eves[i - 1];
            let r = range.map(|v| v * 1e3).unwrap_or(old.range);
            let a = angle.unwrap_or(old.angle.to_degrees());
            sc.eves[i - 1] = Location::from_degrees(r, a)
                .map_err(|e| Error::Config(format!("{prefix}.range_km/angle_deg: {e}")))?;
        }
        if let Some(t) = target {
            if t == 0 || t as usize > sc.bobs.len() {
                return Err(Error::Config(format!(
                    "{prefix}.target: must name a Bob between 1 and {}",
                    sc.bobs.len()
                )));
            }
            eve_targets[i - 1] = Some(t as usize - 1);
        }
    }

    if let Some((preset, line)) = kv.take("eve_preset") {
        match preset.as_str() {
            "many9" => {
                for loc in many_eves_preset() {
                    sc.eves.push(loc);
                    eve_targets.push(None);
                }
            }
            other => {
                return Err(Error::Parse {
                    line,
                    msg: format!("eve_preset: unknown preset '{other}'"),
                })
            }
        }
    }

    // Default grading target: the same-index Bob, clamped.
    let eve_targets: Vec<usize> = eve_targets
        .iter()
        .enumerate()
        .map(|(v, t)| t.unwrap_or_else(|| v.min(sc.bobs.len() - 1)))
        .collect();

    // Harness-level settings.
    let snr_grid_db = kv.grid("snr_grid_db")?;
    let min_symbols = kv.u64("min_symbols")?;
    let min_errors = kv.u64("min_errors")?;
    let max_symbols = kv.u64("max_symbols")?;
    let sweep_overrides = SweepOverrides {
        angle_points: kv.u64("angle_points")?.map(|v| v as usize),
        angle_min_deg: kv.f64("angle_min_deg")?,
        angle_max_deg: kv.f64("angle_max_deg")?,
        range_points: kv.u64("range_points")?.map(|v| v as usize),
        range_min_km: kv.f64("range_min_km")?,
        range_max_km: kv.f64("range_max_km")?,
        location_cases: kv.pairs("location_cases")?,
        dalpha_grid: kv.grid("dalpha_grid")?,
        rate_grid: kv.grid("rate_grid")?,
    };
    let probe_target = match kv.u64("probe_target")? {
        Some(0) => {
            return Err(Error::Config(
                "probe_target: Bobs are numbered from 1".into(),
            ))
        }
        Some(t) => Some(t as usize - 1),
        None => None,
    };
    let robust_bob = match kv.u64("robust_bob")? {
        Some(0) => return Err(Error::Config("robust_bob: Bobs are numbered from 1".into())),
        Some(t) => Some(t as usize - 1),
        None => None,
    };
    let leaked_eves = kv.bool("leaked_eves")?;

    kv.reject_unknown()?;
    sc.validate()?;
    Ok(ParsedConfig {
        scenario: sc,
        snr_grid_db,
        min_symbols,
        min_errors,
        max_symbols,
        sweep_overrides,
        probe_target,
        robust_bob,
        leaked_eves,
        eve_targets,
    })
}

/// Parse a scenario alone (defaults applied, invariants validated).
pub fn scenario_from_str(text: &str) -> Result<Scenario> {
    Ok(parse_config(text)?.scenario)
}

/// Load a scenario from a config file.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    scenario_from_str(&text)
}

/// Assemble a full experiment spec from config text plus CLI-level choices.
pub fn experiment_from_str(
    text: &str,
    kind: ExperimentKind,
    seed: u64,
    scheme_override: Option<Scheme>,
    probe_override: Option<ProbeMode>,
) -> Result<ExperimentSpec> {
    let parsed = parse_config(text)?;
    let defaults = experiment_defaults(kind);
    let ov = &parsed.sweep_overrides;
    let angle_grid_deg = match (ov.angle_points, ov.angle_min_deg, ov.angle_max_deg) {
        (None, None, None) => defaults.sweep.angle_grid_deg.clone(),
        (pts, lo, hi) => linspace(lo.unwrap_or(-90.0), hi.unwrap_or(90.0), pts.unwrap_or(721)),
    };
    let range_grid_km = match (ov.range_points, ov.range_min_km, ov.range_max_km) {
        (None, None, None) => defaults.sweep.range_grid_km.clone(),
        (pts, lo, hi) => linspace(lo.unwrap_or(100.0), hi.unwrap_or(300.0), pts.unwrap_or(200)),
    };
    let spec = ExperimentSpec {
        scenario: parsed.scenario,
        experiment: kind,
        snr_grid_db: parsed.snr_grid_db.unwrap_or(defaults.snr_grid_db),
        sweep: SweepGrid {
            angle_grid_deg,
            range_grid_km,
            location_cases: ov
                .location_cases
                .clone()
                .unwrap_or(defaults.sweep.location_cases),
            dalpha_grid: ov.dalpha_grid.clone().unwrap_or(defaults.sweep.dalpha_grid),
            rate_grid: ov.rate_grid.clone().unwrap_or(defaults.sweep.rate_grid),
        },
        min_symbols: parsed.min_symbols.unwrap_or(defaults.min_symbols),
        min_errors: parsed.min_errors.unwrap_or(defaults.min_errors),
        max_symbols: parsed.max_symbols.unwrap_or(defaults.max_symbols),
        seed,
        probe_mode: probe_override.unwrap_or(ProbeMode::WithKey),
        schemes: match scheme_override {
            Some(s) => vec![s],
            None => Scheme::all(),
        },
        leaked_eves: parsed.leaked_eves.unwrap_or(true),
        probe_target: parsed.probe_target.unwrap_or(0),
        robust_bob: parsed.robust_bob.unwrap_or(1),
        eve_targets: parsed.eve_targets,
    };
    spec.validate()?;
    Ok(spec)
}

/// Load an experiment spec; a missing config path means all defaults.
pub fn load_experiment(
    path: Option<&Path>,
    kind: ExperimentKind,
    seed: u64,
    scheme_override: Option<Scheme>,
    probe_override: Option<ProbeMode>,
) -> Result<ExperimentSpec> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?,
        None => String::new(),
    };
    experiment_from_str(&text, kind, seed, scheme_override, probe_override)
}

struct ExperimentDefaults {
    snr_grid_db: Vec<f64>,
    min_symbols: u64,
    min_errors: u64,
    max_symbols: u64,
    sweep: SweepGrid,
}

fn experiment_defaults(kind: ExperimentKind) -> ExperimentDefaults {
    let sweep = SweepGrid {
        angle_grid_deg: linspace(-90.0, 90.0, 721),
        range_grid_km: linspace(100.0, 300.0, 200),
        location_cases: vec![(1.0, 0.0), (0.0, 2.0), (1.0, 2.0)],
        dalpha_grid: vec![0.01, 0.05],
        rate_grid: linspace(1.0, 8.0, 8),
    };
    match kind {
        ExperimentKind::BerVsSnr => ExperimentDefaults {
            snr_grid_db: linspace(0.0, 12.0, 7),
            min_symbols: 200_000,
            min_errors: 100,
            max_symbols: 2_000_000,
            sweep,
        },
        ExperimentKind::BerVsAngle | ExperimentKind::BerVsRange => ExperimentDefaults {
            snr_grid_db: vec![10.0],
            min_symbols: 10_000,
            min_errors: 50,
            max_symbols: 100_000,
            sweep,
        },
        ExperimentKind::SecrecyVsSnr => ExperimentDefaults {
            snr_grid_db: linspace(0.0, 20.0, 11),
            min_symbols: 10_000,
            min_errors: 50,
            max_symbols: 100_000,
            sweep,
        },
        // Closed-form per cell; a 1-degree x 2-km default grid keeps the
        // output around 55k rows.
        ExperimentKind::SecrecyMap => ExperimentDefaults {
            snr_grid_db: linspace(0.0, 20.0, 11),
            min_symbols: 10_000,
            min_errors: 50,
            max_symbols: 100_000,
            sweep: SweepGrid {
                angle_grid_deg: linspace(-90.0, 90.0, 181),
                range_grid_km: linspace(100.0, 300.0, 101),
                ..sweep
            },
        },
        ExperimentKind::RobustnessLocation | ExperimentKind::RobustnessAlpha => {
            ExperimentDefaults {
                snr_grid_db: linspace(6.0, 14.0, 9),
                min_symbols: 200_000,
                min_errors: 100,
                max_symbols: 2_000_000,
                sweep,
            }
        }
        ExperimentKind::PropertySuite => ExperimentDefaults {
            snr_grid_db: vec![10.0],
            min_symbols: 10_000,
            min_errors: 50,
            max_symbols: 100_000,
            sweep,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_is_the_default_scenario() {
        let sc = scenario_from_str("").unwrap();
        let def = default_scenario();
        assert_eq!(sc.bobs.len(), 3);
        assert_eq!(sc.eves.len(), 2);
        assert_eq!(sc.fda, def.fda);
        assert_eq!(sc.ps, 1.0);
        assert!((sc.noise_var - 0.1).abs() < 1e-15);
        assert_eq!(sc.bobs[0].alphabet.m, 2);
        assert_eq!(sc.bobs[1].alphabet.m, 4);
        assert_eq!(sc.bobs[2].alphabet.m, 8);
        assert_eq!(sc.bobs[2].block_len, 5);
        assert_eq!(sc.coop_wfrft.alpha, 0.5);
        assert_eq!(sc.coop_wfrft.m_vec, [1, 2, 3, 4]);
    }

    #[test]
    fn overrides_apply() {
        let sc = scenario_from_str(
            "bob3.modulation = 8psk\nbob2.modulation = qpsk\nbob1.modulation = 8psk\n\
             snr_db = 6\nbeta1 = 0.8\nalpha = 1.25\nbob2.q = 7\n",
        )
        .unwrap();
        assert_eq!(sc.bobs[0].alphabet.m, 8);
        assert_eq!(sc.bobs[1].block_len, 7);
        assert!((sc.noise_var - 10.0_f64.powf(-0.6)).abs() < 1e-12);
        assert!((sc.an_baseline.beta1 - 0.8).abs() < 1e-15);
        assert!((sc.coop_wfrft.alpha - 1.25).abs() < 1e-15);
    }

    #[test]
    fn errors_name_the_key() {
        let err = scenario_from_str("bob1.range_km = -5\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bob1.range_km"), "{msg}");
        assert!(msg.contains("range"), "{msg}");

        let err = scenario_from_str("gibberish_key = 3\n").unwrap_err();
        assert!(err.to_string().contains("gibberish_key"));

        let err = scenario_from_str("snr_db\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn grids_and_pairs_parse() {
        let spec = experiment_from_str(
            "snr_grid_db = 0:2:6\nlocation_cases = 1:0;0.5:1.5\ndalpha_grid = 0.01,0.02\n",
            ExperimentKind::BerVsSnr,
            7,
            None,
            None,
        )
        .unwrap();
        assert_eq!(spec.snr_grid_db, vec![0.0, 2.0, 4.0, 6.0]);
        assert_eq!(spec.sweep.location_cases, vec![(1.0, 0.0), (0.5, 1.5)]);
        assert_eq!(spec.sweep.dalpha_grid, vec![0.01, 0.02]);
        assert_eq!(spec.schemes.len(), 3);
    }

    #[test]
    fn new_receivers_extend_the_set() {
        let sc = scenario_from_str(
            "bob4.range_km = 200\nbob4.angle_deg = 20\neve3.range_km = 120\neve3.angle_deg = -10\n",
        )
        .unwrap();
        assert_eq!(sc.bobs.len(), 4);
        assert_eq!(sc.eves.len(), 3);
        assert_eq!(sc.bobs[3].alphabet.m, 4);
        // A gap is rejected.
        assert!(scenario_from_str("bob6.range_km = 10\nbob6.angle_deg = 0\n").is_err());
    }

    #[test]
    fn eve_preset_and_targets() {
        let cfg = parse_config("eve_preset = many9\neve2.target = 3\n").unwrap();
        assert_eq!(cfg.scenario.eves.len(), 11);
        assert_eq!(cfg.eve_targets[0], 0);
        assert_eq!(cfg.eve_targets[1], 2);
        // Preset observers default to the clamped same-index target.
        assert_eq!(cfg.eve_targets[10], 2);
    }

    #[test]
    fn validation_floor_on_sample_counts() {
        let err = experiment_from_str(
            "min_symbols = 100\n",
            ExperimentKind::BerVsSnr,
            1,
            None,
            None,
        )
        .unwrap_err();
        assert!(err.to_string().contains("min_symbols"));
    }
}
