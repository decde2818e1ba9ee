//! Staged elimination pipeline.
//!
//! Three long-running operations, all budgeted, seeded, and resumable:
//!
//! * [`build_90_36`]: scan all 10,000,000 `(A, M2)` glue tuples, refute
//!   almost all of them with randomized low-weight witnesses, then close
//!   out the undecided remainder with symmetry orbits and exact
//!   cycle-orbit weight enumeration.
//! * [`case_f0`]: extend each surviving base by tail patterns (stage A,
//!   with exact verification of survivors) and then by order-3 component
//!   codes (stage B, refutation only).
//! * [`case_f6`]: extend each surviving base by the 891 order-3
//!   self-dual components and refute every extension.
//!
//! Budgets count candidates examined; an exact weight-distribution
//! certification counts as one candidate. When the budget runs out the
//! operation returns [`SearchError::BudgetExceeded`] carrying a partial
//! report and a resume token; rerunning with the token (same seed)
//! continues where the scan stopped and produces the same final answer
//! as an unbudgeted run.

use std::collections::{HashMap, HashSet, VecDeque};
use std::path::PathBuf;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomp::CycleStructure;
use crate::gf2core::{
    low_weight_search, sigma_orbit_weight_distribution, BinaryCode, LowWeightOutcome, Perm,
    WitnessWord,
};

use super::action::GroupElement;
use super::glue::{
    a_material, b9036_g, b9036_indices, b9036_universe_size, candidate_code, descriptor_id,
    fixed_templates_f0, glue_9036, glue_9036_by_index, m1_f0_universe, m1_f6_universe,
    m2_universe, universe_digest, AMaterial, CandidateDescriptor, M2Universe,
};
use super::report::{
    Budget, CertRecord, Coverage, EvidenceManifest, OrbitMember, OrbitRecord, ResumeToken,
    SearchReport, StageCount, SurvivorRecord, TemplateMember, TemplateOrbit, TemplateOrbitRecord,
    WitnessRecord, WitnessShard, EVIDENCE_FORMAT_VERSION,
};
use super::stab::joint_stabilizer;

/// Iteration rungs for the refutation ladder. Most tuples fall to the
/// first rung; the later rungs keep the undecided set small enough for
/// exact certification to be affordable.
pub const SCAN_RUNGS: [u64; 3] = [6, 60, 600];

/// Extra rungs spent hunting a witness for a candidate whose exact
/// weight distribution already shows a word below the target. Keeps the
/// final evidence checkable from witnesses alone.
pub const RESCUE_RUNGS: [u64; 2] = [6_000, 60_000];

/// Candidates per scan chunk. Chunks are merged in index order, so
/// results do not depend on the thread count.
const SCAN_CHUNK: u64 = 8_192;

/// Candidates needing a weight below this are considered refuted; the
/// searches therefore target weight `DISTANCE_GOAL - 1`.
pub const DISTANCE_GOAL: u32 = 20;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub seed: u64,
    pub budget: Budget,
    pub threads: usize,
    /// Where witness shards, orbit records, and the manifest get written.
    /// `None` keeps everything in memory.
    pub evidence_dir: Option<PathBuf>,
    /// Content-addressed cache for exact weight distributions.
    pub cache_dir: Option<PathBuf>,
    /// How many stage-A survivors to certify exactly. `None` certifies
    /// all of them; the default keeps table verification affordable.
    pub verify_rows: Option<usize>,
    pub resume: Option<ResumeToken>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 1,
            budget: Budget::unlimited(),
            threads: 1,
            evidence_dir: None,
            cache_dir: None,
            verify_rows: Some(3),
            resume: None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    /// The candidate budget ran out. The report describes everything
    /// decided so far and carries a token that resumes the run.
    #[error("candidate budget exhausted after {} candidates", .report.coverage.decided)]
    BudgetExceeded { report: Box<SearchReport> },
    #[error("resume token rejected: {0}")]
    InvalidResume(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Output of the base search: the full report plus one record per
/// undecided-orbit, covering both survivors and exact rejections.
#[derive(Clone, Debug)]
pub struct B9036Output {
    pub report: SearchReport,
    pub orbits: Vec<OrbitRecord>,
}

impl B9036Output {
    /// Orbits whose exact minimum weight meets the goal.
    pub fn survivor_orbits(&self) -> impl Iterator<Item = &OrbitRecord> {
        self.orbits.iter().filter(|o| o.is_survivor())
    }
}

/// SplitMix64 finalizer over a seed/stream pair. Candidate searches use
/// `mix(master_seed, candidate_index)` so outcomes depend only on the
/// seed and the candidate, never on scheduling.
fn mix(a: u64, b: u64) -> u64 {
    let mut x = a ^ b.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    x ^= x >> 30;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^= x >> 31;
    x
}

fn sigma_90() -> &'static Perm {
    static SIGMA: OnceLock<Perm> = OnceLock::new();
    SIGMA.get_or_init(|| CycleStructure::uniform(15, 6, 0).permutation())
}

fn sigma_96() -> &'static Perm {
    static SIGMA: OnceLock<Perm> = OnceLock::new();
    SIGMA.get_or_init(|| CycleStructure::order15_f0().permutation())
}

/// Runs the refutation ladder against `code`, looking for a nonzero word
/// of weight below [`DISTANCE_GOAL`]. Deterministic in `(code, seed)`.
fn ladder(code: &BinaryCode, seed: u64, rungs: &[u64]) -> Option<WitnessWord> {
    for (rung, &iters) in rungs.iter().enumerate() {
        match low_weight_search(code, DISTANCE_GOAL as usize - 1, iters, mix(seed, rung as u64)) {
            LowWeightOutcome::Found(w) => {
                debug_assert!(code.contains(w.word) && w.word.count_ones() < DISTANCE_GOAL);
                return Some(w);
            }
            LowWeightOutcome::NotFound { .. } => {}
        }
    }
    None
}

/// Ladder plus the deeper rescue rungs; used where a witness is known to
/// exist (or strongly expected) and worth more effort.
fn deep_ladder(code: &BinaryCode, seed: u64) -> Option<WitnessWord> {
    ladder(code, seed, &SCAN_RUNGS).or_else(|| {
        for (rung, &iters) in RESCUE_RUNGS.iter().enumerate() {
            let rung_seed = mix(seed, (SCAN_RUNGS.len() + rung) as u64);
            if let LowWeightOutcome::Found(w) =
                low_weight_search(code, DISTANCE_GOAL as usize - 1, iters, rung_seed)
            {
                return Some(w);
            }
        }
        None
    })
}

fn checked_witness(code: &BinaryCode, word: u128) -> bool {
    word != 0 && word.count_ones() < DISTANCE_GOAL && code.contains(word)
}

/// Loads a cached certification for `desc` or computes and stores one.
/// Cache entries are keyed by the descriptor id, so a hit is only
/// trusted after the stored descriptor matches.
fn cached_cert(
    cache_dir: &Option<PathBuf>,
    desc: &CandidateDescriptor,
    compute: impl FnOnce() -> CertRecord,
) -> CertRecord {
    let path = cache_dir
        .as_ref()
        .map(|d| d.join(format!("wd_{}.json", descriptor_id(desc))));
    if let Some(p) = &path {
        if let Ok(cert) = super::report::load_json::<CertRecord>(p) {
            if &cert.descriptor == desc {
                let mut cert = cert;
                cert.from_cache = true;
                return cert;
            }
        }
    }
    let cert = compute();
    if let Some(p) = &path {
        if let Some(dir) = p.parent() {
            let _ = std::fs::create_dir_all(dir);
        }
        let _ = super::report::save_json(p, &cert);
    }
    cert
}

/// Exact cycle-orbit weight distribution of one base tuple. Roughly ten
/// seconds of work, so results go through the certification cache.
pub fn certify_9036_tuple(
    a_idx: usize,
    m2_idx: u32,
    cache_dir: &Option<PathBuf>,
) -> CertRecord {
    let desc = CandidateDescriptor::Base9036 { a_idx: a_idx as u32, m2_idx };
    cached_cert(cache_dir, &desc, || {
        let code = glue_9036_by_index(a_idx, m2_idx);
        let wd = sigma_orbit_weight_distribution(&code, sigma_90())
            .expect("the [90,36] bases fit the orbit enumerator");
        CertRecord {
            descriptor: desc,
            min_weight: wd.min_nonzero_weight().unwrap_or(0) as u32,
            counts: wd.counts().to_vec(),
            from_cache: false,
        }
    })
}

/// Exact weight distribution of one stage-A extension.
pub fn certify_96_f0_tuple(
    desc: &CandidateDescriptor,
    cache_dir: &Option<PathBuf>,
) -> CertRecord {
    assert!(matches!(desc, CandidateDescriptor::StageA { .. }));
    cached_cert(cache_dir, desc, || {
        let code = candidate_code(desc);
        let wd = sigma_orbit_weight_distribution(&code, sigma_96())
            .expect("the [96,40] extensions fit the orbit enumerator");
        CertRecord {
            descriptor: *desc,
            min_weight: wd.min_nonzero_weight().unwrap_or(0) as u32,
            counts: wd.counts().to_vec(),
            from_cache: false,
        }
    })
}

// ---------------------------------------------------------------------------
// Evidence plumbing shared by the three operations.

struct Evidence {
    dir: Option<PathBuf>,
    manifest: EvidenceManifest,
    shard: Option<WitnessShard>,
    stage: &'static str,
    segment: u64,
}

impl Evidence {
    fn open(dir: &Option<PathBuf>, seed: u64, digest: &str) -> Result<Evidence, SearchError> {
        let manifest = match dir {
            Some(d) => {
                std::fs::create_dir_all(d)?;
                if d.join("manifest.json").exists() {
                    let m = EvidenceManifest::load(d)?;
                    if m.universe_digest != digest {
                        return Err(SearchError::InvalidResume(format!(
                            "evidence at {} was produced for a different universe",
                            d.display()
                        )));
                    }
                    if m.seed != seed {
                        return Err(SearchError::InvalidResume(format!(
                            "evidence at {} was produced with seed {}, not {}",
                            d.display(),
                            m.seed,
                            seed
                        )));
                    }
                    m
                } else {
                    EvidenceManifest::new(seed, digest.to_string())
                }
            }
            None => EvidenceManifest::new(seed, digest.to_string()),
        };
        Ok(Evidence {
            dir: dir.clone(),
            manifest,
            shard: None,
            stage: "",
            segment: 0,
        })
    }

    /// Starts (lazily) the shard for `stage`, numbered by `segment`.
    fn set_stage(&mut self, stage: &'static str, segment: u64) -> Result<(), SearchError> {
        self.roll()?;
        self.stage = stage;
        self.segment = segment;
        Ok(())
    }

    fn push(&mut self, rec: &WitnessRecord) -> Result<(), SearchError> {
        if let Some(dir) = self.dir.clone() {
            if self.shard.is_none() {
                self.shard = Some(WitnessShard::create(&dir, self.stage, self.segment)?);
            }
            self.shard.as_mut().unwrap().push(rec)?;
        }
        Ok(())
    }

    /// Closes the open shard, if any, and registers it in the manifest.
    fn roll(&mut self) -> Result<(), SearchError> {
        if let Some(shard) = self.shard.take() {
            let info = shard.finish()?;
            self.manifest.add(self.stage, info);
        }
        Ok(())
    }

    fn add_json<T: Serialize>(
        &mut self,
        key: &str,
        name: &str,
        value: &T,
    ) -> Result<(), SearchError> {
        if let Some(dir) = self.dir.clone() {
            let info = super::report::save_json(&dir.join(name), value)?;
            self.manifest.add(key, info);
        }
        Ok(())
    }

    fn save(&mut self) -> Result<(), SearchError> {
        self.roll()?;
        if let Some(dir) = &self.dir {
            self.manifest.save(dir)?;
        }
        Ok(())
    }
}

fn thread_pool(threads: usize) -> Result<rayon::ThreadPool, SearchError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| SearchError::Precondition(format!("thread pool: {e}")))
}

fn decode_resume<S: for<'a> Deserialize<'a>>(
    token: &ResumeToken,
    op: &str,
    seed: u64,
    digest: &str,
) -> Result<S, SearchError> {
    if token.version != EVIDENCE_FORMAT_VERSION {
        return Err(SearchError::InvalidResume(format!(
            "token format {} unsupported (expected {})",
            token.version, EVIDENCE_FORMAT_VERSION
        )));
    }
    if token.op != op {
        return Err(SearchError::InvalidResume(format!(
            "token is for op {:?}, not {:?}",
            token.op, op
        )));
    }
    if token.seed != seed {
        return Err(SearchError::InvalidResume(format!(
            "token was minted with seed {}, run uses {}",
            token.seed, seed
        )));
    }
    if token.universe_digest != digest {
        return Err(SearchError::InvalidResume(
            "token universe digest does not match this build".into(),
        ));
    }
    serde_json::from_str(&token.state_json)
        .map_err(|e| SearchError::InvalidResume(format!("state: {e}")))
}

fn encode_resume<S: Serialize>(op: &str, seed: u64, digest: &str, state: &S) -> ResumeToken {
    ResumeToken {
        version: EVIDENCE_FORMAT_VERSION,
        op: op.to_string(),
        seed,
        universe_digest: digest.to_string(),
        state_json: serde_json::to_string(state).expect("resume state serializes"),
    }
}

// ---------------------------------------------------------------------------
// build_90_36

#[derive(Clone, Debug, Serialize, Deserialize)]
struct B9036State {
    next_g: u64,
    scan_witnessed: u64,
    undecided: Vec<u64>,
    /// Shard segment for the next write; bumped every resume so partial
    /// files are never appended to.
    segment: u64,
    orbit_cursor: usize,
    transported: u64,
    orbits_done: Vec<OrbitRecord>,
    hunt_failures: u64,
}

impl B9036State {
    fn fresh() -> Self {
        B9036State {
            next_g: 0,
            scan_witnessed: 0,
            undecided: Vec::new(),
            segment: 0,
            orbit_cursor: 0,
            transported: 0,
            orbits_done: Vec::new(),
            hunt_failures: 0,
        }
    }
}

/// One undecided symmetry orbit, before certification. `contact` is a
/// scan-refuted tuple reachable from the representative, if the walk
/// brushed one; its witness transports to every member.
struct PreOrbit {
    rep_g: u64,
    members: Vec<OrbitMember>,
    contact: Option<(u64, GroupElement)>,
}

/// Scans one block of up to 32 candidates sharing an M2 row image.
fn scan_block(
    a: &AMaterial,
    m2: &M2Universe,
    seed: u64,
    m2_idx: u32,
    a_lo: usize,
    a_hi: usize,
) -> Vec<(u64, Option<WitnessWord>)> {
    let image = m2.codes[m2_idx as usize].binary_image();
    (a_lo..a_hi)
        .map(|a_idx| {
            let g = b9036_g(m2_idx, a_idx);
            let code = glue_9036(&a.images[a_idx], image.rows());
            (g, ladder(&code, mix(seed, g), &SCAN_RUNGS))
        })
        .collect()
}

/// Splits `[lo, hi)` into per-M2 work units aligned to 32-candidate
/// blocks so each unit builds its M2 image once.
fn block_units(lo: u64, hi: u64) -> Vec<(u32, usize, usize)> {
    let mut units = Vec::new();
    let mut g = lo;
    while g < hi {
        let (m2_idx, a_lo) = b9036_indices(g);
        let a_hi = usize::min(32, a_lo + (hi - g) as usize);
        units.push((m2_idx, a_lo, a_hi));
        g += (a_hi - a_lo) as u64;
    }
    units
}

/// Partitions the undecided tuples into orbits under the stabilizer of
/// their A part acting on M2. The walk only expands through undecided
/// tuples; decided neighbors are recorded as witness contacts. Members
/// carry the group element taking the orbit representative to them.
fn partition_undecided(a: &AMaterial, m2u: &M2Universe, undecided: &[u64]) -> Vec<PreOrbit> {
    let undec: HashSet<u64> = undecided.iter().copied().collect();
    let mut visited: HashSet<u64> = HashSet::new();
    let mut orbits = Vec::new();
    for &g0 in undecided {
        if visited.contains(&g0) {
            continue;
        }
        let (m2_0, a_idx) = b9036_indices(g0);
        let stab = a.stab(a_idx);
        let mut nu_of: HashMap<u32, GroupElement> = HashMap::new();
        let mut queue = VecDeque::new();
        nu_of.insert(m2_0, GroupElement::identity());
        queue.push_back(m2_0);
        let mut contact: Option<(u64, GroupElement)> = None;
        while let Some(m) = queue.pop_front() {
            let nu_m = nu_of[&m];
            let code = &m2u.codes[m as usize];
            for s in stab {
                let target = s.act_component(code);
                let mi = m2u
                    .index_of(&target)
                    .expect("the normalizer action preserves the M2 universe");
                if mi == m {
                    continue;
                }
                let g = b9036_g(mi, a_idx);
                if undec.contains(&g) {
                    if let std::collections::hash_map::Entry::Vacant(e) = nu_of.entry(mi) {
                        e.insert(s.compose(&nu_m));
                        queue.push_back(mi);
                    }
                } else if contact.is_none() {
                    contact = Some((g, s.compose(&nu_m)));
                }
            }
        }
        let mut members: Vec<(u64, GroupElement)> = nu_of
            .into_iter()
            .map(|(mi, nu)| (b9036_g(mi, a_idx), nu))
            .collect();
        members.sort_by_key(|&(g, _)| g);
        let inv_rep = members[0].1.inverse();
        let rep_g = members[0].0;
        let members: Vec<OrbitMember> = members
            .into_iter()
            .map(|(g, nu)| OrbitMember {
                g,
                nu: nu.compose(&inv_rep),
            })
            .collect();
        let contact = contact.map(|(g, nu)| (g, nu.compose(&inv_rep)));
        for m in &members {
            visited.insert(m.g);
        }
        orbits.push(PreOrbit {
            rep_g,
            members,
            contact,
        });
    }
    orbits
}

/// Recomputes the scan outcome for a refuted tuple. The scan is a pure
/// function of `(seed, g)`, so this reproduces the exact witness without
/// having stored it.
fn recompute_scan_witness(seed: u64, g: u64) -> WitnessWord {
    let (m2_idx, a_idx) = b9036_indices(g);
    let code = glue_9036_by_index(a_idx, m2_idx);
    ladder(&code, mix(seed, g), &SCAN_RUNGS)
        .expect("contact tuples were refuted by the scan with the same seed")
}

fn b9036_report(
    seed: u64,
    digest: &str,
    budget: &Budget,
    state: &B9036State,
    n_orbits: Option<usize>,
    resume: Option<ResumeToken>,
) -> SearchReport {
    let total = b9036_universe_size();
    let m2 = m2_universe();
    let mut report = SearchReport::new("build_90_36", "base", seed, *budget, digest);
    report.stages.push(StageCount {
        stage: "scan".into(),
        universe: total,
        examined: state.next_g,
        witnessed: state.scan_witnessed,
        certified_rejects: 0,
        survivors: 0,
        undecided: state.undecided.len() as u64,
        fingerprint_classes: None,
    });
    let mut cert_reject_members = 0u64;
    let mut survivor_members = 0u64;
    let mut fingerprints: HashSet<Vec<u64>> = HashSet::new();
    for orbit in &state.orbits_done {
        let size = orbit.members.len() as u64;
        if orbit.is_survivor() {
            survivor_members += size;
            fingerprints.insert(orbit.cert.counts.clone());
            let (m2_idx, a_idx) = b9036_indices(orbit.rep_g);
            let mut rec =
                SurvivorRecord::new(CandidateDescriptor::Base9036 { a_idx: a_idx as u32, m2_idx });
            rec.orbit_size = size;
            rec.class = Some(m2.class_name(m2_idx).to_string());
            rec.cert = Some(orbit.cert.clone());
            report.survivors.push(rec);
        } else {
            cert_reject_members += size;
        }
    }
    report.stages.push(StageCount {
        stage: "orbits".into(),
        universe: n_orbits.map(|n| n as u64).unwrap_or(0),
        examined: state.orbit_cursor as u64,
        witnessed: state.transported,
        certified_rejects: cert_reject_members,
        survivors: survivor_members,
        undecided: 0,
        fingerprint_classes: Some(fingerprints.len() as u64),
    });
    report.witness_total = state.scan_witnessed + state.transported;
    report.all_survivors_exact = true;
    report.all_rejects_verified = state.hunt_failures == 0;
    report.coverage = Coverage {
        decided: state.scan_witnessed + state.transported + cert_reject_members + survivor_members,
        universe: total,
    };
    report.resume = resume;
    report
}

/// Budget bookkeeping for one operation run, including candidates spent
/// by the runs a resume token carries forward.
struct Meter {
    budget: Budget,
    used: u64,
}

impl Meter {
    fn new(budget: &Budget, already: u64) -> Meter {
        Meter {
            budget: *budget,
            used: already,
        }
    }

    /// How many of `want` candidates fit in the rest of the budget.
    fn take(&mut self, want: u64) -> u64 {
        let granted = match self.budget.max_candidates {
            None => want,
            Some(max) => want.min(max.saturating_sub(self.used)),
        };
        self.used += granted;
        granted
    }
}

/// Candidates already spent producing `state`, so resumed runs keep
/// budgets comparable across segments.
fn b9036_spent(state: &B9036State) -> u64 {
    state.next_g + state.orbit_cursor as u64
}

pub fn build_90_36(cfg: &SearchConfig) -> Result<B9036Output, SearchError> {
    const OP: &str = "build_90_36";
    let digest = universe_digest();
    let a = a_material();
    let m2 = m2_universe();
    let total = b9036_universe_size();

    let mut state: B9036State = match &cfg.resume {
        Some(token) => {
            let mut s: B9036State = decode_resume(token, OP, cfg.seed, &digest)?;
            s.segment += 1;
            s
        }
        None => B9036State::fresh(),
    };
    let mut meter = Meter::new(&cfg.budget, b9036_spent(&state));
    let mut evidence = Evidence::open(&cfg.evidence_dir, cfg.seed, &digest)?;
    evidence.set_stage("base", state.segment)?;
    let pool = thread_pool(cfg.threads)?;

    // Phase 1: budgeted scan in deterministic chunks.
    while state.next_g < total {
        let want = (total - state.next_g).min(SCAN_CHUNK);
        let granted = meter.take(want);
        if granted == 0 {
            evidence.save()?;
            let token = encode_resume(OP, cfg.seed, &digest, &state);
            let report = b9036_report(
                cfg.seed,
                &digest,
                &cfg.budget,
                &state,
                None,
                Some(token),
            );
            return Err(SearchError::BudgetExceeded {
                report: Box::new(report),
            });
        }
        let lo = state.next_g;
        let hi = lo + granted;
        let units = block_units(lo, hi);
        let results: Vec<Vec<(u64, Option<WitnessWord>)>> = pool.install(|| {
            units
                .par_iter()
                .map(|&(m2_idx, a_lo, a_hi)| scan_block(a, m2, cfg.seed, m2_idx, a_lo, a_hi))
                .collect()
        });
        for (g, outcome) in results.into_iter().flatten() {
            match outcome {
                Some(w) => {
                    let (m2_idx, a_idx) = b9036_indices(g);
                    let desc =
                        CandidateDescriptor::Base9036 { a_idx: a_idx as u32, m2_idx };
                    evidence.push(&WitnessRecord::new(desc, &w))?;
                    state.scan_witnessed += 1;
                }
                None => state.undecided.push(g),
            }
        }
        state.next_g = hi;
    }

    // Phase 2: orbit partition of the undecided set. Deterministic, so
    // resumed runs rebuild the same orbit list and skip the prefix.
    let orbits = partition_undecided(a, m2, &state.undecided);

    // Phase 3: decide each orbit, cheapest evidence first.
    while state.orbit_cursor < orbits.len() {
        let orbit = &orbits[state.orbit_cursor];
        let (rep_m2, rep_a) = b9036_indices(orbit.rep_g);
        if let Some((contact_g, contact_nu)) = &orbit.contact {
            // A refuted neighbor exists: transport its witness to every
            // member instead of certifying. Costs no budget; the scan
            // already paid for these tuples.
            let w = recompute_scan_witness(cfg.seed, *contact_g);
            let to_rep = contact_nu.binary_perm().inverse();
            let w_rep = to_rep.apply_word(w.word);
            let rep_code = glue_9036_by_index(rep_a, rep_m2);
            assert!(
                checked_witness(&rep_code, w_rep),
                "transported witness must lie in the representative code"
            );
            for member in &orbit.members {
                let word_m = member.nu.binary_perm().apply_word(w_rep);
                let (m_m2, m_a) = b9036_indices(member.g);
                let member_code = glue_9036_by_index(m_a, m_m2);
                assert!(
                    checked_witness(&member_code, word_m),
                    "transported witness must lie in each member code"
                );
                let desc = CandidateDescriptor::Base9036 {
                    a_idx: m_a as u32,
                    m2_idx: m_m2,
                };
                let rec = WitnessRecord {
                    descriptor: desc,
                    weight: word_m.count_ones(),
                    word_hex: format!("{word_m:032x}"),
                    iteration: w.iteration,
                };
                evidence.push(&rec)?;
                state.transported += 1;
            }
        } else {
            // Fully undecided orbit: certify the representative exactly.
            if meter.take(1) == 0 {
                evidence.save()?;
                let token = encode_resume(OP, cfg.seed, &digest, &state);
                let report = b9036_report(
                    cfg.seed,
                    &digest,
                    &cfg.budget,
                    &state,
                    Some(orbits.len()),
                    Some(token),
                );
                return Err(SearchError::BudgetExceeded {
                    report: Box::new(report),
                });
            }
            let cert = certify_9036_tuple(rep_a, rep_m2, &cfg.cache_dir);
            let witness = if cert.min_weight >= DISTANCE_GOAL {
                None
            } else {
                // The orbit is dead but the scan missed it; hunt a
                // witness so the evidence never leans on the exact
                // distribution for a rejection.
                let rep_code = glue_9036_by_index(rep_a, rep_m2);
                match deep_ladder(&rep_code, mix(cfg.seed, orbit.rep_g)) {
                    Some(w) => {
                        let desc = CandidateDescriptor::Base9036 {
                            a_idx: rep_a as u32,
                            m2_idx: rep_m2,
                        };
                        let rec = WitnessRecord::new(desc, &w);
                        evidence.push(&rec)?;
                        Some(rec)
                    }
                    None => {
                        state.hunt_failures += 1;
                        None
                    }
                }
            };
            state.orbits_done.push(OrbitRecord {
                rep_g: orbit.rep_g,
                class: m2.class_name(rep_m2).to_string(),
                cert,
                witness,
                members: orbit.members.clone(),
            });
        }
        state.orbit_cursor += 1;
    }

    // Completed: persist orbit records and the manifest.
    state
        .orbits_done
        .sort_by_key(|o| o.rep_g);
    evidence.add_json("base_orbits", "base_orbits.json", &state.orbits_done)?;
    let report = b9036_report(
        cfg.seed,
        &digest,
        &cfg.budget,
        &state,
        Some(orbits.len()),
        None,
    );
    evidence.add_json("base_report", "base_report.json", &report)?;
    evidence.save()?;
    Ok(B9036Output {
        report,
        orbits: state.orbits_done,
    })
}

// ---------------------------------------------------------------------------
// Stage A: tail-pattern extensions of surviving bases.

fn perm8(tau: &[usize; 6], swap: bool) -> Perm {
    let mut map: Vec<usize> = tau.to_vec();
    map.extend(if swap { [7, 6] } else { [6, 7] });
    Perm::from_map(map)
}

/// Orbit partition of the 30 tail patterns under the joint stabilizer's
/// block permutations plus the tail swap.
fn template_orbits(joint: &[GroupElement]) -> Vec<TemplateOrbit> {
    let templates = fixed_templates_f0();
    let index: HashMap<Vec<u128>, u32> = templates
        .iter()
        .enumerate()
        .map(|(i, t)| (t.rows().to_vec(), i as u32))
        .collect();
    let mut seen = vec![false; templates.len()];
    let mut orbits = Vec::new();
    for rep in 0..templates.len() {
        if seen[rep] {
            continue;
        }
        let mut members: HashMap<u32, (GroupElement, bool)> = HashMap::new();
        members.insert(rep as u32, (GroupElement::identity(), false));
        let mut queue = VecDeque::new();
        queue.push_back(rep as u32);
        while let Some(t_idx) = queue.pop_front() {
            let (nu0, swap0) = members[&t_idx];
            let code = &templates[t_idx as usize];
            for nu in joint {
                for swap in [false, true] {
                    let moved = code.permuted(&perm8(&nu.tau, swap));
                    let mi = *index
                        .get(moved.rows())
                        .expect("the tail-pattern set is closed under block moves");
                    if let std::collections::hash_map::Entry::Vacant(e) = members.entry(mi) {
                        e.insert((nu.compose(&nu0), swap ^ swap0));
                        queue.push_back(mi);
                    }
                }
            }
        }
        let mut orbit_members: Vec<TemplateMember> = members
            .into_iter()
            .map(|(template_idx, (nu, swap))| TemplateMember {
                template_idx,
                nu,
                swap,
            })
            .collect();
        orbit_members.sort_by_key(|m| m.template_idx);
        for m in &orbit_members {
            seen[m.template_idx as usize] = true;
        }
        orbits.push(TemplateOrbit {
            rep_template: rep as u32,
            members: orbit_members,
        });
    }
    orbits
}

// ---------------------------------------------------------------------------
// case_f0: stage A plus stage B.

#[derive(Clone, Debug, Serialize, Deserialize)]
struct F0State {
    /// Cursor over surviving base orbits.
    sa_base: usize,
    /// Cursor over template-orbit representatives within the base.
    sa_inner: usize,
    sa_examined: u64,
    sa_witnessed: u64,
    template_records: Vec<TemplateOrbitRecord>,
    survivors: Vec<SurvivorRecord>,
    sa_done: bool,
    cert_cursor: usize,
    certs_done: bool,
    sb_cursor: u64,
    sb_witnessed: u64,
    sb_undecided: Vec<u64>,
    segment: u64,
}

impl F0State {
    fn fresh() -> Self {
        F0State {
            sa_base: 0,
            sa_inner: 0,
            sa_examined: 0,
            sa_witnessed: 0,
            template_records: Vec::new(),
            survivors: Vec::new(),
            sa_done: false,
            cert_cursor: 0,
            certs_done: false,
            sb_cursor: 0,
            sb_witnessed: 0,
            sb_undecided: Vec::new(),
            segment: 0,
        }
    }

    fn spent(&self) -> u64 {
        self.sa_examined + self.cert_cursor as u64 + self.sb_cursor
    }
}

fn f0_report(
    seed: u64,
    digest: &str,
    budget: &Budget,
    state: &F0State,
    m1_total: u64,
    resume: Option<ResumeToken>,
) -> SearchReport {
    let mut report = SearchReport::new("case_f0", "f0", seed, *budget, digest);
    report.stages.push(StageCount {
        stage: "stage_a".into(),
        // Filled in as orbits are discovered; equals the true universe
        // once stage A completes.
        universe: state.sa_examined,
        examined: state.sa_examined,
        witnessed: state.sa_witnessed,
        certified_rejects: 0,
        survivors: state.survivors.len() as u64,
        undecided: 0,
        fingerprint_classes: None,
    });
    let certified = state
        .survivors
        .iter()
        .filter(|s| s.cert.is_some())
        .count() as u64;
    let cert_goal = state.survivors.len() as u64;
    report.stages.push(StageCount {
        stage: "stage_a_certify".into(),
        universe: cert_goal,
        examined: state.cert_cursor as u64,
        witnessed: 0,
        certified_rejects: state
            .survivors
            .iter()
            .filter(|s| {
                s.cert
                    .as_ref()
                    .is_some_and(|c| c.min_weight < DISTANCE_GOAL)
            })
            .count() as u64,
        survivors: certified,
        undecided: 0,
        fingerprint_classes: Some(
            state
                .survivors
                .iter()
                .filter_map(|s| s.cert.as_ref().map(|c| c.counts.clone()))
                .collect::<HashSet<_>>()
                .len() as u64,
        ),
    });
    let sb_universe = state.survivors.len() as u64 * m1_total;
    report.stages.push(StageCount {
        stage: "stage_b".into(),
        universe: sb_universe,
        examined: state.sb_cursor,
        witnessed: state.sb_witnessed,
        certified_rejects: 0,
        survivors: 0,
        undecided: state.sb_undecided.len() as u64,
        fingerprint_classes: None,
    });
    report.survivors = state.survivors.clone();
    report.witness_total = state.sa_witnessed + state.sb_witnessed;
    report.all_survivors_exact = state.certs_done || state.survivors.iter().all(|s| s.cert.is_some());
    report.all_rejects_verified = state.sb_undecided.is_empty();
    // Stage A decisions cover whole template orbits; stage B decides
    // individual extensions.
    report.coverage = Coverage {
        decided: state.sa_witnessed + state.survivors.len() as u64 + state.sb_witnessed,
        universe: state.sa_examined + sb_universe,
    };
    report.resume = resume;
    report
}

pub fn case_f0(build: &B9036Output, cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    const OP: &str = "case_f0";
    if !build.report.coverage.complete() {
        return Err(SearchError::Precondition(
            "case_f0 needs a completed base search".into(),
        ));
    }
    let digest = universe_digest();
    let a = a_material();
    let m2 = m2_universe();
    let m1 = m1_f0_universe();
    let templates = fixed_templates_f0();
    let survivor_orbits: Vec<&OrbitRecord> = build.survivor_orbits().collect();

    let mut state: F0State = match &cfg.resume {
        Some(token) => {
            let mut s: F0State = decode_resume(token, OP, cfg.seed, &digest)?;
            s.segment += 1;
            s
        }
        None => F0State::fresh(),
    };
    let mut meter = Meter::new(&cfg.budget, state.spent());
    let mut evidence = Evidence::open(&cfg.evidence_dir, cfg.seed, &digest)?;
    evidence.set_stage("stage_a", state.segment)?;

    let bail = |state: &F0State, evidence: &mut Evidence| -> Result<SearchReport, SearchError> {
        evidence.save()?;
        let token = encode_resume(OP, cfg.seed, &digest, state);
        Ok(f0_report(
            cfg.seed,
            &digest,
            &cfg.budget,
            state,
            m1.len() as u64,
            Some(token),
        ))
    };

    // Stage A: one candidate per (base, tail-pattern orbit).
    while state.sa_base < survivor_orbits.len() {
        let orbit = survivor_orbits[state.sa_base];
        let (m2_idx, a_idx) = b9036_indices(orbit.rep_g);
        let joint = joint_stabilizer(a.stab(a_idx), &m2.codes[m2_idx as usize]);
        let t_orbits = template_orbits(&joint);
        // One record per base; the length check keeps resumed runs from
        // duplicating a record pushed just before a budget cut.
        if state.template_records.len() == state.sa_base {
            state.template_records.push(TemplateOrbitRecord {
                base: CandidateDescriptor::Base9036 { a_idx: a_idx as u32, m2_idx },
                orbits: t_orbits.clone(),
            });
        }
        let base_rows = glue_9036_by_index(a_idx, m2_idx);
        while state.sa_inner < t_orbits.len() {
            if meter.take(1) == 0 {
                let report = bail(&state, &mut evidence)?;
                return Err(SearchError::BudgetExceeded {
                    report: Box::new(report),
                });
            }
            let t_idx = t_orbits[state.sa_inner].rep_template;
            let desc = CandidateDescriptor::StageA {
                a_idx: a_idx as u32,
                m2_idx,
                template_idx: t_idx,
            };
            let code = super::glue::glue_96_f0(&base_rows, &templates[t_idx as usize]);
            state.sa_examined += 1;
            match ladder(&code, mix(cfg.seed, 1_000_000_000 ^ desc_seed(&desc)), &SCAN_RUNGS) {
                Some(w) => {
                    evidence.push(&WitnessRecord::new(desc, &w))?;
                    state.sa_witnessed += 1;
                }
                None => {
                    let mut rec = SurvivorRecord::new(desc);
                    rec.orbit_size = t_orbits[state.sa_inner].members.len() as u64;
                    state.survivors.push(rec);
                }
            }
            state.sa_inner += 1;
        }
        state.sa_inner = 0;
        state.sa_base += 1;
    }
    state.sa_done = true;

    // Exact verification of stage-A survivors, capped by verify_rows.
    let cert_cap = cfg
        .verify_rows
        .unwrap_or(state.survivors.len())
        .min(state.survivors.len());
    while state.cert_cursor < cert_cap {
        if meter.take(1) == 0 {
            let report = bail(&state, &mut evidence)?;
            return Err(SearchError::BudgetExceeded {
                report: Box::new(report),
            });
        }
        let desc = state.survivors[state.cert_cursor].descriptor;
        let cert = certify_96_f0_tuple(&desc, &cfg.cache_dir);
        state.survivors[state.cert_cursor].cert = Some(cert);
        state.cert_cursor += 1;
    }
    state.certs_done = true;

    // Stage B: extend every tentative survivor by every order-3
    // component; all must be refuted.
    evidence.set_stage("stage_b", state.segment)?;
    let sb_total = state.survivors.len() as u64 * m1.len() as u64;
    while state.sb_cursor < sb_total {
        if meter.take(1) == 0 {
            let report = bail(&state, &mut evidence)?;
            return Err(SearchError::BudgetExceeded {
                report: Box::new(report),
            });
        }
        let s_idx = (state.sb_cursor / m1.len() as u64) as usize;
        let m1_idx = (state.sb_cursor % m1.len() as u64) as u32;
        let (a_idx, m2_idx, template_idx) = match &state.survivors[s_idx].descriptor {
            CandidateDescriptor::StageA {
                a_idx,
                m2_idx,
                template_idx,
            } => (*a_idx, *m2_idx, *template_idx),
            other => panic!("stage-A survivor list holds {other:?}"),
        };
        let desc = CandidateDescriptor::StageB {
            a_idx,
            m2_idx,
            template_idx,
            m1_idx,
        };
        let code = candidate_code(&desc);
        match deep_ladder(&code, mix(cfg.seed, 2_000_000_000 ^ desc_seed(&desc))) {
            Some(w) => {
                evidence.push(&WitnessRecord::new(desc, &w))?;
                state.sb_witnessed += 1;
            }
            None => state.sb_undecided.push(state.sb_cursor),
        }
        state.sb_cursor += 1;
    }

    evidence.add_json(
        "template_orbits",
        "template_orbits.json",
        &state.template_records,
    )?;
    let report = f0_report(cfg.seed, &digest, &cfg.budget, &state, m1.len() as u64, None);
    evidence.add_json("f0_report", "f0_report.json", &report)?;
    evidence.save()?;
    Ok(report)
}

fn desc_seed(desc: &CandidateDescriptor) -> u64 {
    let id = descriptor_id(desc);
    u64::from_str_radix(&id[..16], 16).expect("descriptor ids are hex")
}

// ---------------------------------------------------------------------------
// case_f6

#[derive(Clone, Debug, Serialize, Deserialize)]
struct F6State {
    cursor: u64,
    witnessed: u64,
    max_witness_weight: u32,
    undecided: Vec<u64>,
    segment: u64,
}

impl F6State {
    fn fresh() -> Self {
        F6State {
            cursor: 0,
            witnessed: 0,
            max_witness_weight: 0,
            undecided: Vec::new(),
            segment: 0,
        }
    }
}

fn f6_report(
    seed: u64,
    digest: &str,
    budget: &Budget,
    state: &F6State,
    universe: u64,
    resume: Option<ResumeToken>,
) -> SearchReport {
    let mut report = SearchReport::new("case_f6", "f6", seed, *budget, digest);
    report.stages.push(StageCount {
        stage: "f6".into(),
        universe,
        examined: state.cursor,
        witnessed: state.witnessed,
        certified_rejects: 0,
        survivors: 0,
        undecided: state.undecided.len() as u64,
        fingerprint_classes: None,
    });
    report.witness_total = state.witnessed;
    report.all_survivors_exact = true;
    report.all_rejects_verified = state.undecided.is_empty();
    report.coverage = Coverage {
        decided: state.witnessed,
        universe,
    };
    report.resume = resume;
    report
}

pub fn case_f6(build: &B9036Output, cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    const OP: &str = "case_f6";
    if !build.report.coverage.complete() {
        return Err(SearchError::Precondition(
            "case_f6 needs a completed base search".into(),
        ));
    }
    let digest = universe_digest();
    let m1 = m1_f6_universe();
    let survivor_orbits: Vec<&OrbitRecord> = build.survivor_orbits().collect();
    let universe = survivor_orbits.len() as u64 * m1.len() as u64;

    let mut state: F6State = match &cfg.resume {
        Some(token) => {
            let mut s: F6State = decode_resume(token, OP, cfg.seed, &digest)?;
            s.segment += 1;
            s
        }
        None => F6State::fresh(),
    };
    let mut meter = Meter::new(&cfg.budget, state.cursor);
    let mut evidence = Evidence::open(&cfg.evidence_dir, cfg.seed, &digest)?;
    evidence.set_stage("f6", state.segment)?;

    while state.cursor < universe {
        if meter.take(1) == 0 {
            evidence.save()?;
            let token = encode_resume(OP, cfg.seed, &digest, &state);
            let report = f6_report(cfg.seed, &digest, &cfg.budget, &state, universe, Some(token));
            return Err(SearchError::BudgetExceeded {
                report: Box::new(report),
            });
        }
        let o_idx = (state.cursor / m1.len() as u64) as usize;
        let m1_idx = (state.cursor % m1.len() as u64) as u32;
        let (m2_idx, a_idx) = b9036_indices(survivor_orbits[o_idx].rep_g);
        let desc = CandidateDescriptor::CaseF6 {
            a_idx: a_idx as u32,
            m2_idx,
            m1_idx,
        };
        let code = candidate_code(&desc);
        match deep_ladder(&code, mix(cfg.seed, 3_000_000_000 ^ desc_seed(&desc))) {
            Some(w) => {
                evidence.push(&WitnessRecord::new(desc, &w))?;
                state.witnessed += 1;
                state.max_witness_weight = state.max_witness_weight.max(w.weight as u32);
            }
            None => state.undecided.push(state.cursor),
        }
        state.cursor += 1;
    }

    let mut report = f6_report(cfg.seed, &digest, &cfg.budget, &state, universe, None);
    report.case_label = format!("f6 max_witness_weight={}", state.max_witness_weight);
    evidence.add_json("f6_report", "f6_report.json", &report)?;
    evidence.save()?;
    Ok(report)
}
