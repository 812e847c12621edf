//! End-to-end driver: both factor actions, the intertwiner, Følner matching,
//! forced amalgam witnesses, verification and persistence.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::amalgam::{
    evaluate_raw, force_amalgam_witness, intertwining_violations, match_folner_sigma,
    match_orbits_sigma, nontrivial_census, normal_form, witness_set, Factor, Factors, RawWord,
    SigmaSnapshot, SigmaState,
};
use crate::error::{Error, Result};
use crate::padding::balance;
use crate::generic::{
    build_generic_action, check_amalgamating_word, folner_set, orbit_census, orbits_finite,
    schedule, Budgets, Condition, ConditionKind, FolnerPlan, GenericAction, GenericReport,
    Interval,
};
use crate::snapshot::ActionSnapshot;
use crate::word::{reduced_words_up_to, Alphabet, Gen, Letter, Word, BETA};

/// Environment variable naming the default output directory.
pub const ENV_OUT_DIR: &str = "PINCH_OUT_DIR";

/// Free points between the two factors' regions.
pub const FACTOR_SPACING: i64 = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineBudgets {
    pub powers: usize,
    /// Every reduced word up to this length gets a `Q`-witness.
    pub witness_len: usize,
    /// Witnesses per word.
    pub witness_copies: usize,
    pub orbit_sizes: usize,
    pub copies: usize,
    pub intervals: usize,
    /// Sizes `k` of the `c`-fixed sets matched across `σ`.
    pub folner_sizes: Vec<usize>,
    /// Raw words (`a`/`b` and `x`/`y` letters) to force a moved point for.
    pub amalgam_words: Vec<String>,
}

impl Default for PipelineBudgets {
    fn default() -> Self {
        PipelineBudgets {
            powers: 0,
            witness_len: 0,
            witness_copies: 1,
            orbit_sizes: 0,
            copies: 0,
            intervals: 0,
            folner_sizes: Vec::new(),
            amalgam_words: Vec::new(),
        }
    }
}

fn default_margin() -> i64 {
    8
}

fn default_padding_trials() -> usize {
    20_000
}

fn default_max_gadgets() -> usize {
    10_000
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub n: usize,
    pub m: usize,
    pub c: String,
    pub d: String,
    #[serde(default)]
    pub budgets: PipelineBudgets,
    #[serde(default = "default_margin")]
    pub window_margin: i64,
    /// Random candidates tried per padding gadget.
    #[serde(default = "default_padding_trials")]
    pub padding_trials: usize,
    #[serde(default = "default_max_gadgets")]
    pub max_gadgets: usize,
    /// Seed for the padding search.
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

fn config_error(which: &str, text: &str, e: Error) -> Error {
    let hint = match e {
        Error::NonzeroBetaSum { .. } | Error::InBetaSubgroup(_) => {
            "; zero_sum_automorphism (`pinch word autzero`) rewrites the word so that \
             some occurring generator has exponent sum 0, which can then be used as b"
        }
        _ => "",
    };
    Error::Config(format!("{which} = {text:?}: {e}{hint}"))
}

impl PipelineConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        PipelineConfig::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Parses and checks `c` and `d` and the budgets.
    pub fn validate(&self) -> Result<(Word, Word)> {
        let c = Word::parse_with(&self.c, Alphabet::First).map_err(|e| config_error("c", &self.c, e))?;
        let d = Word::parse_with(&self.d, Alphabet::Second).map_err(|e| config_error("d", &self.d, e))?;
        for (name, text, w, rank) in [("c", &self.c, &c, self.n), ("d", &self.d, &d, self.m)] {
            if let Some(g) = w.max_gen().filter(|&g| g > rank) {
                return Err(config_error(name, text, Error::GeneratorOutOfRange { gen: g, rank }));
            }
            check_amalgamating_word(w).map_err(|e| config_error(name, text, e))?;
        }
        if let Some(&k) = self
            .budgets
            .folner_sizes
            .iter()
            .find(|&&k| k == 0 || k > self.budgets.intervals)
        {
            return Err(Error::Config(format!(
                "Følner size {k} needs 1 <= k <= intervals = {}",
                self.budgets.intervals
            )));
        }
        if self.budgets.witness_copies == 0 && self.budgets.witness_len > 0 {
            return Err(Error::Config("witness_copies must be positive".into()));
        }
        for text in &self.budgets.amalgam_words {
            text.parse::<RawWord>()
                .map_err(|e| config_error("amalgam word", text, e))?;
        }
        Ok((c, d))
    }

    /// Output directory from the config, else from the environment.
    pub fn resolved_out_dir(&self) -> Option<PathBuf> {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os(ENV_OUT_DIR).map(PathBuf::from))
    }
}

/// `[a_1,b_1]⋯[a_g,b_g] = 1` as `c = d` with `c = [a_1,b_1]⋯[a_{g−1},b_{g−1}]`
/// and `d = [a_g,b_g]⁻¹`.
///
/// In the first factor `b_1` becomes `b`, `a_1` becomes `a1` and `a_i`, `b_i`
/// become `a(2i−2)`, `a(2i−1)`; in the second, `a_g` is `x1` and `b_g` is `b`.
pub fn surface_preset(genus: usize) -> Result<PipelineConfig> {
    if genus < 2 {
        return Err(Error::Config(format!("surface genus {genus} < 2 has no splitting")));
    }
    let mut parts = vec!["a1 b a1^-1 b^-1".to_string()];
    for i in 2..genus {
        let (a, b) = (2 * i - 2, 2 * i - 1);
        parts.push(format!("a{a} a{b} a{a}^-1 a{b}^-1"));
    }
    Ok(PipelineConfig {
        n: 2 * genus - 3,
        m: 1,
        c: parts.join(" "),
        d: "b x1 b^-1 x1^-1".into(),
        budgets: PipelineBudgets {
            powers: 3,
            witness_len: 3,
            witness_copies: 2,
            orbit_sizes: 3,
            copies: 2,
            intervals: 50,
            folner_sizes: vec![10, 50],
            amalgam_words: vec![
                "a1 x1".into(),
                "x1 a1".into(),
                "a1 x1 b y".into(),
                "b^-1 y^2 a1 x1^-1".into(),
            ],
        },
        window_margin: default_margin(),
        padding_trials: default_padding_trials(),
        max_gadgets: default_max_gadgets(),
        seed: 0,
        out_dir: None,
    })
}

/// A bijection `π` of `α`-indices with `d = π(c)` or `d = π(c)⁻¹`, as
/// `rename[i − 1] = π(i)`.
pub fn renaming(c: &Word, d: &Word, n: usize, m: usize) -> Option<Vec<Gen>> {
    if n != m {
        return None;
    }
    let c = c.free_reduce();
    let d = d.free_reduce();
    'targets: for target in [d.clone(), d.inverse()] {
        if target.len() != c.len() {
            continue;
        }
        let mut pi = vec![0; n + 1];
        let mut taken = vec![false; m + 1];
        for (lc, ld) in c.letters().iter().zip(target.letters()) {
            if lc.inverse != ld.inverse || (lc.gen == BETA) != (ld.gen == BETA) {
                continue 'targets;
            }
            if lc.gen == BETA {
                continue;
            }
            if pi[lc.gen] == 0 {
                if taken[ld.gen] {
                    continue 'targets;
                }
                pi[lc.gen] = ld.gen;
                taken[ld.gen] = true;
            } else if pi[lc.gen] != ld.gen {
                continue 'targets;
            }
        }
        let mut free = (1..=m).filter(|&j| !taken[j]);
        for slot in pi.iter_mut().skip(1) {
            if *slot == 0 {
                *slot = free.next().expect("n == m");
            }
        }
        return Some(pi[1..].to_vec());
    }
    None
}

pub fn rename_word(w: &Word, rename: &[Gen]) -> Word {
    Word::from_letters(
        w.letters()
            .iter()
            .map(|l| match l.gen {
                BETA => *l,
                g => Letter::new(rename[g - 1], l.inverse),
            })
            .collect(),
    )
}

fn invert_renaming(rename: &[Gen]) -> Vec<Gen> {
    let mut inv = vec![0; rename.len()];
    for (i, &j) in rename.iter().enumerate() {
        inv[j - 1] = i + 1;
    }
    inv
}

/// Moves a factor action by `offset` and renames its generators.
fn transport_action(
    g: &GenericAction,
    d: &Word,
    offset: i64,
    rank: usize,
    rename: &[Gen],
) -> Result<GenericAction> {
    let state = g.state.transported(offset, rank, rename)?;
    let conditions = g
        .conditions
        .iter()
        .map(|cond| Condition {
            kind: match &cond.kind {
                ConditionKind::Witness { word } => ConditionKind::Witness {
                    word: rename_word(word, rename),
                },
                other => other.clone(),
            },
            status: cond.status,
            evidence: cond.evidence.iter().map(|x| x + offset).collect(),
        })
        .collect();
    Ok(GenericAction {
        c: d.clone(),
        closed: state.close(),
        state,
        plan: FolnerPlan {
            intervals: g
                .plan
                .intervals
                .iter()
                .map(|iv| Interval::new(iv.lo + offset, iv.hi + offset))
                .collect(),
            s_plus: crate::generic::s_plus(d),
        },
        conditions,
    })
}

fn unique_push(list: &mut Vec<Word>, w: Word) {
    if !list.contains(&w) {
        list.push(w);
    }
}

fn witness_words(rank: usize, len: usize, base: &Word) -> Vec<Word> {
    reduced_words_up_to(rank, len)
        .into_iter()
        .filter(|w| w.is_power_of(base).is_none())
        .collect()
}

fn repeat(words: &[Word], copies: usize) -> Vec<Word> {
    (0..copies).flat_map(|_| words.iter().cloned()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForcedRecord {
    pub word: String,
    pub normal_form: String,
    pub x0: i64,
    pub image: i64,
    pub chain: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FolnerTransfer {
    pub k: usize,
    pub generator: String,
    pub num: i64,
    pub den: i64,
    /// `|σA △ hσA|` and `|B △ hB|` for second-factor generators.
    pub chain: Option<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaSummary {
    pub moved_points: usize,
    pub orbit_matches: usize,
    pub pinned: usize,
    pub violations: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub c: String,
    pub d: String,
    pub transported: bool,
    pub g: GenericReport,
    pub h: GenericReport,
    pub sigma: SigmaSummary,
    pub folner: Vec<FolnerTransfer>,
    pub amalgam: Vec<ForcedRecord>,
    pub checks: BTreeMap<String, bool>,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub config: PipelineConfig,
    pub c: Word,
    pub d: Word,
    pub g: GenericAction,
    pub h: GenericAction,
    pub sigma: SigmaState,
    pub transported: bool,
    pub report: PipelineReport,
}

impl PipelineRun {
    /// Both factor regions, widened by the margin.
    pub fn window(&self) -> Interval {
        combined_window(&self.g, &self.h, self.config.window_margin)
    }

    pub fn factors(&self) -> Factors<'_> {
        Factors {
            ga: &self.g.closed,
            ha: &self.h.closed,
            c: &self.c,
            d: &self.d,
            window: self.window(),
        }
    }

    pub fn passed(&self) -> bool {
        self.report.passed
    }

    /// Writes `config.json`, both action snapshots, `sigma.json` and
    /// `report.json`.
    pub fn write_outputs(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let files = [
            ("config.json", self.config.to_json()),
            ("g_action.json", ActionSnapshot::from_state(&self.g.state).to_json()),
            ("h_action.json", ActionSnapshot::from_state(&self.h.state).to_json()),
            (
                "sigma.json",
                serde_json::to_string_pretty(&self.sigma.to_snapshot())?,
            ),
            ("report.json", serde_json::to_string_pretty(&self.report)?),
        ];
        let mut out = Vec::new();
        for (name, text) in files {
            let path = dir.join(name);
            fs::write(&path, text)?;
            out.push(path);
        }
        Ok(out)
    }
}

fn combined_window(g: &GenericAction, h: &GenericAction, margin: i64) -> Interval {
    Interval::new(
        g.state.origin().min(h.state.origin()) - margin,
        g.state.next_free().max(h.state.next_free()) + margin,
    )
}

/// The window widened to cover every point `σ` was reassigned on.
fn check_window(window: Interval, sigma: &SigmaState, margin: i64) -> Interval {
    let hi = sigma.max_point().map_or(window.hi, |p| window.hi.max(p + margin));
    Interval::new(window.lo, hi)
}

fn build_factors(
    config: &PipelineConfig,
    c: &Word,
    d: &Word,
    amalgam: &[RawWord],
) -> Result<(GenericAction, GenericAction, bool)> {
    let b = &config.budgets;
    let g_words = witness_words(config.n, b.witness_len, c);
    let h_words = witness_words(config.m, b.witness_len, d);
    // one extra witness per syllable occurrence, so forcing never runs dry
    let (mut g_extra, mut h_extra) = (Vec::new(), Vec::new());
    for raw in amalgam {
        for s in normal_form(raw, c, d).syllables {
            match s.factor {
                Factor::G => g_extra.push(s.word),
                Factor::H => h_extra.push(s.word),
            }
        }
    }
    let budgets = |words: &[Word], extra: &[Word]| Budgets {
        powers: b.powers,
        witness_words: repeat(words, b.witness_copies).into_iter().chain(extra.iter().cloned()).collect(),
        orbit_sizes: b.orbit_sizes,
        copies: b.copies,
        intervals: b.intervals,
    };

    if let Some(rename) = renaming(c, d, config.n, config.m) {
        let back = invert_renaming(&rename);
        let mut words = g_words;
        for w in &h_words {
            unique_push(&mut words, rename_word(w, &back));
        }
        g_extra.extend(h_extra.iter().map(|w| rename_word(w, &back)));
        let g = build_generic_action(c, config.n, &schedule(c, &budgets(&words, &g_extra))?, 0)?;
        let offset = g.state.next_free() + FACTOR_SPACING - g.state.origin();
        let h = transport_action(&g, d, offset, config.m, &rename)?;
        return Ok((g, h, true));
    }

    let mut g = build_generic_action(c, config.n, &schedule(c, &budgets(&g_words, &g_extra))?, 0)?;
    let h_origin = g.state.next_free() + FACTOR_SPACING;
    let mut h = build_generic_action(d, config.m, &schedule(d, &budgets(&h_words, &h_extra))?, h_origin)?;
    let window = combined_window(&g, &h, config.window_margin);
    let gc = nontrivial_census(&g.closed, c, window)?;
    let hc = nontrivial_census(&h.closed, d, window)?;
    let floor = h.state.next_free() + FACTOR_SPACING;
    balance(
        (&mut g.state, c),
        (&mut h.state, d),
        (&gc, &hc),
        floor,
        config.padding_trials,
        config.max_gadgets,
        config.seed,
    )?;
    g.refresh();
    h.refresh();
    Ok((g, h, false))
}

/// Builds and verifies everything the config asks for.
///
/// Errors mean the run could not be completed: `Error::Config` for a bad
/// config, anything else for a construction that did not go through (for
/// example orbit censuses of the two factors that could not be balanced).
/// A completed run may still carry failed checks in its report.
pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineRun> {
    let (c, d) = config.validate()?;
    let amalgam: Vec<RawWord> = config
        .budgets
        .amalgam_words
        .iter()
        .map(|t| t.parse())
        .collect::<Result<_>>()?;
    let (g, h, transported) = build_factors(config, &c, &d, &amalgam)?;
    let margin = config.window_margin;
    let window = combined_window(&g, &h, margin);
    let f = Factors {
        ga: &g.closed,
        ha: &h.closed,
        c: &c,
        d: &d,
        window,
    };
    let mut sigma = match_orbits_sigma(&f, window)?;

    let mut folner = Vec::new();
    let mut folner_ok = true;
    for &k in &config.budgets.folner_sizes {
        let a = folner_set(&g.plan, &c, k, &g.closed)?;
        let b = folner_set(&h.plan, &d, k, &h.closed)?;
        let (a_pts, b_pts): (Vec<i64>, Vec<i64>) = (a.points().collect(), b.points().collect());
        match_folner_sigma(&mut sigma, &a_pts, &b_pts, &f)?;
        let entries = folner_transfer(&sigma, &f, config, &a_pts, &b_pts);
        folner_ok &= entries.iter().all(|e| {
            e.num * k as i64 <= 2 * e.den && e.chain.map_or(true, |[l, r]| l == r)
        });
        folner.extend(entries);
    }

    let mut forced = Vec::new();
    for (text, raw) in config.budgets.amalgam_words.iter().zip(&amalgam) {
        let nf = normal_form(raw, &c, &d);
        let fw = force_amalgam_witness(&mut sigma, &nf, &f)?;
        forced.push(ForcedRecord {
            word: text.clone(),
            normal_form: nf.to_string(),
            x0: fw.x0,
            image: fw.image,
            chain: fw.chain,
        });
    }

    let cw = check_window(window, &sigma, margin);
    let fc = Factors { window: cw, ..f };
    let violations = intertwining_violations(&sigma, &fc);
    let c_raw = RawWord::from_factor(Factor::G, &c);
    let d_raw = RawWord::from_factor(Factor::H, &d);
    let c_is_d = cw
        .points()
        .all(|x| evaluate_raw(&sigma, &fc, &c_raw, x) == evaluate_raw(&sigma, &fc, &d_raw, x));
    let pins_hold = sigma.pinned().iter().all(|(&p, &q)| sigma.apply(p) == q);
    let forced_ok = forced.iter().zip(&amalgam).all(|(r, raw)| {
        evaluate_raw(&sigma, &fc, raw, r.x0) == r.image && r.image != r.x0
    });

    let g_report = g.report(margin, Alphabet::First);
    let h_report = h.report(margin, Alphabet::Second);
    let mut checks = BTreeMap::new();
    checks.insert("g_report".to_string(), g_report.flags.all());
    checks.insert("h_report".to_string(), h_report.flags.all());
    checks.insert("audit".to_string(), g.state.audit().is_ok() && h.state.audit().is_ok());
    checks.insert("intertwining".to_string(), violations.is_empty());
    checks.insert("c_equals_d".to_string(), c_is_d);
    checks.insert("sigma_pins".to_string(), pins_hold);
    checks.insert("folner_transfer".to_string(), folner_ok);
    checks.insert("amalgam_witnesses".to_string(), forced_ok);
    let passed = checks.values().all(|&v| v);

    let report = PipelineReport {
        c: c.display_with(Alphabet::First).to_string(),
        d: d.display_with(Alphabet::Second).to_string(),
        transported,
        g: g_report,
        h: h_report,
        sigma: SigmaSummary {
            moved_points: sigma.pairs().count(),
            orbit_matches: sigma.orbit_matches().len(),
            pinned: sigma.pinned().len(),
            violations,
        },
        folner,
        amalgam: forced,
        checks,
        passed,
    };
    Ok(PipelineRun {
        config: config.clone(),
        c,
        d,
        g,
        h,
        sigma,
        transported,
        report,
    })
}

/// Generators of both factors as raw words, `G` first.
pub fn factor_generators(n: usize, m: usize) -> Vec<RawWord> {
    let g = (0..=n).map(|i| RawWord::from_factor(Factor::G, &Word::letter(i)));
    let h = (0..=m).map(|j| RawWord::from_factor(Factor::H, &Word::letter(j)));
    g.chain(h).collect()
}

fn sym_diff_size(set: &BTreeSet<i64>, moved: impl Iterator<Item = i64>) -> usize {
    2 * moved.filter(|y| !set.contains(y)).count()
}

fn folner_transfer(
    sigma: &SigmaState,
    f: &Factors,
    config: &PipelineConfig,
    a: &[i64],
    b: &[i64],
) -> Vec<FolnerTransfer> {
    let a_set: BTreeSet<i64> = a.iter().copied().collect();
    let b_set: BTreeSet<i64> = b.iter().copied().collect();
    let sa: BTreeSet<i64> = a.iter().map(|&x| sigma.apply(x)).collect();
    factor_generators(config.n, config.m)
        .into_iter()
        .map(|u| {
            let d = sym_diff_size(&a_set, a.iter().map(|&x| evaluate_raw(sigma, f, &u, x)));
            let r = num_rational::Ratio::new(d as i64, a.len() as i64);
            let chain = (u.0[0].factor == Factor::H).then(|| {
                let h = Word::from_letters(vec![u.0[0].letter]);
                [
                    sym_diff_size(&sa, sa.iter().map(|&y| f.ha.evaluate(&h, y))),
                    sym_diff_size(&b_set, b.iter().map(|&y| f.ha.evaluate(&h, y))),
                ]
            });
            FolnerTransfer {
                k: a.len(),
                generator: u.to_string(),
                num: *r.numer(),
                den: *r.denom(),
                chain,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub g_census: BTreeMap<usize, usize>,
    pub h_census: BTreeMap<usize, usize>,
    pub violations: Vec<i64>,
    pub folner: Vec<FolnerTransfer>,
    pub checks: BTreeMap<String, bool>,
    pub passed: bool,
}

/// Rechecks a run from its saved files alone.
pub fn verify_outputs(dir: &Path) -> Result<VerifyReport> {
    let config = PipelineConfig::load(&dir.join("config.json"))?;
    let g = ActionSnapshot::load(&dir.join("g_action.json"))?;
    let h = ActionSnapshot::load(&dir.join("h_action.json"))?;
    let sigma: SigmaSnapshot = serde_json::from_str(&fs::read_to_string(dir.join("sigma.json"))?)?;
    verify_snapshots(&config, &g, &h, &SigmaState::from_snapshot(&sigma)?)
}

pub fn verify_snapshots(
    config: &PipelineConfig,
    g_snap: &ActionSnapshot,
    h_snap: &ActionSnapshot,
    sigma: &SigmaState,
) -> Result<VerifyReport> {
    let (c, d) = config.validate()?;
    let g = GenericAction::from_state(&c, g_snap.to_state()?);
    let h = GenericAction::from_state(&d, h_snap.to_state()?);
    let margin = config.window_margin;
    let window = combined_window(&g, &h, margin);
    let cw = check_window(window, sigma, margin);
    let f = Factors {
        ga: &g.closed,
        ha: &h.closed,
        c: &c,
        d: &d,
        window: cw,
    };
    let b = &config.budgets;
    let g_census = orbit_census(&g.closed, &c, g.window(margin));
    let h_census = orbit_census(&h.closed, &d, h.window(margin));
    let census_ok = (1..=b.orbit_sizes).all(|m| {
        g_census.get(&m).copied().unwrap_or(0) >= b.copies
            && h_census.get(&m).copied().unwrap_or(0) >= b.copies
    });
    let witnesses_ok = witness_words(config.n, b.witness_len, &c)
        .iter()
        .all(|w| witness_set(&g.closed, &c, w, g.window(margin)).is_ok_and(|s| !s.is_empty()))
        && witness_words(config.m, b.witness_len, &d)
            .iter()
            .all(|w| witness_set(&h.closed, &d, w, h.window(margin)).is_ok_and(|s| !s.is_empty()));
    let violations = intertwining_violations(sigma, &f);

    let mut folner = Vec::new();
    let mut folner_ok = true;
    for &k in &b.folner_sizes {
        let a: Vec<i64> = folner_set(&g.plan, &c, k, &g.closed)?.points().collect();
        let bb: Vec<i64> = folner_set(&h.plan, &d, k, &h.closed)?.points().collect();
        folner_ok &= a.iter().zip(&bb).all(|(&x, &y)| sigma.apply(x) == y);
        let entries = folner_transfer(sigma, &f, config, &a, &bb);
        folner_ok &= entries.iter().all(|e| e.num * k as i64 <= 2 * e.den);
        folner.extend(entries);
    }

    let mut checks = BTreeMap::new();
    checks.insert("census".to_string(), census_ok);
    checks.insert("witnesses".to_string(), witnesses_ok);
    checks.insert(
        "orbits_finite".to_string(),
        orbits_finite(&g.closed, &c, g.window(margin)) && orbits_finite(&h.closed, &d, h.window(margin)),
    );
    checks.insert("intertwining".to_string(), violations.is_empty());
    checks.insert("folner_transfer".to_string(), folner_ok);
    let passed = checks.values().all(|&v| v);
    Ok(VerifyReport {
        g_census,
        h_census,
        violations,
        folner,
        checks,
        passed,
    })
}
