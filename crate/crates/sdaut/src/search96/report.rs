//! Report, witness and evidence-bundle types.
//!
//! Reports are pure data: deterministic functions of the seed, the budget
//! and the pinned universes, with no timestamps or machine identifiers,
//! so byte-identical reruns are a meaningful check. The evidence bundle
//! on disk carries the full witness stream (reports keep a capped
//! sample), the orbit records that extend pointwise verdicts to whole
//! equivalence classes, and a manifest of content digests.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::action::GroupElement;
use super::glue::{descriptor_id, CandidateDescriptor};
use crate::gf2core::WitnessWord;

pub const EVIDENCE_FORMAT_VERSION: u32 = 1;

/// Most candidates a single call may examine. Certifications count as
/// candidates too: they are the expensive units of work.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_candidates: Option<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { max_candidates: None }
    }

    pub fn limited(n: u64) -> Self {
        Budget { max_candidates: Some(n) }
    }

    pub fn allows(&self, used: u64) -> bool {
        self.max_candidates.map_or(true, |m| used < m)
    }
}

/// A verified refutation: a codeword of the named candidate with weight
/// below the survival threshold. Everything needed to re-verify it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub descriptor: CandidateDescriptor,
    pub weight: u32,
    pub word_hex: String,
    /// Which randomized search iteration produced the word.
    pub iteration: u64,
}

impl WitnessRecord {
    pub fn new(descriptor: CandidateDescriptor, w: &WitnessWord) -> Self {
        WitnessRecord {
            descriptor,
            weight: w.weight as u32,
            word_hex: format!("{:032x}", w.word),
            iteration: w.iteration,
        }
    }

    pub fn word(&self) -> Option<u128> {
        u128::from_str_radix(&self.word_hex, 16).ok()
    }
}

/// Exact weight-distribution certificate for one candidate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertRecord {
    pub descriptor: CandidateDescriptor,
    pub min_weight: u32,
    /// Full distribution, counts[w] words of weight w.
    pub counts: Vec<u64>,
    pub from_cache: bool,
}

/// One member of a normalizer orbit: `nu` maps the orbit representative
/// onto this member's candidate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitMember {
    pub g: u64,
    pub nu: GroupElement,
}

/// A fully-undecided orbit and its exact verdict. Members inherit the
/// representative's certificate through the recorded transports, which a
/// verifier can re-check codeword-free: permuting the representative's
/// candidate by `nu` must reproduce the member's candidate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub rep_g: u64,
    pub class: String,
    pub cert: CertRecord,
    /// Present exactly when the certificate refutes (minimum below 20):
    /// a concrete word of the representative backing the verdict.
    pub witness: Option<WitnessRecord>,
    pub members: Vec<OrbitMember>,
}

impl OrbitRecord {
    pub fn is_survivor(&self) -> bool {
        self.cert.min_weight >= 20
    }
}

/// One member of a tail-pattern orbit: the member pattern equals the
/// orbit representative permuted by `nu`'s block permutation on the six
/// projected 15-cycle coordinates plus an optional swap of the two
/// projected 3-cycle coordinates. `nu` must fix the [90, 36] base, which
/// a verifier re-checks directly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateMember {
    pub template_idx: u32,
    pub nu: GroupElement,
    pub swap: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateOrbit {
    pub rep_template: u32,
    pub members: Vec<TemplateMember>,
}

/// Tail-pattern deduplication record for one surviving base: the orbits
/// partition all 30 patterns, so examining one representative per orbit
/// covers the whole template universe for that base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateOrbitRecord {
    pub base: CandidateDescriptor,
    pub orbits: Vec<TemplateOrbit>,
}

/// Counters for one stage of one case.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCount {
    pub stage: String,
    pub universe: u64,
    pub examined: u64,
    /// Refuted by a verified low-weight word.
    pub witnessed: u64,
    /// Refuted by an exact certificate (directly or through an orbit
    /// transport).
    pub certified_rejects: u64,
    pub survivors: u64,
    /// Neither refuted nor certified; nonzero only on budget-truncated
    /// or escalation-exhausted runs.
    pub undecided: u64,
    pub fingerprint_classes: Option<u64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    /// Candidates with a verdict (their own or through an orbit).
    pub decided: u64,
    pub universe: u64,
}

impl Coverage {
    pub fn complete(&self) -> bool {
        self.decided == self.universe
    }
}

/// Opaque continuation for a budget-truncated run. Only the operation
/// that issued a token accepts it, and only over identical universes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResumeToken {
    pub version: u32,
    pub op: String,
    pub seed: u64,
    pub universe_digest: String,
    pub state_json: String,
}

/// A surviving candidate (or candidate class) of one stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurvivorRecord {
    pub descriptor: CandidateDescriptor,
    pub id: String,
    /// Number of candidates this record speaks for.
    pub orbit_size: u64,
    pub class: Option<String>,
    /// Exact certificate when one was computed; survivorship is
    /// probabilistic otherwise and flagged so.
    pub cert: Option<CertRecord>,
}

impl SurvivorRecord {
    pub fn new(descriptor: CandidateDescriptor) -> Self {
        let id = descriptor_id(&descriptor);
        SurvivorRecord { descriptor, id, orbit_size: 1, class: None, cert: None }
    }
}

pub const WITNESS_SAMPLE_CAP: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub version: u32,
    pub op: String,
    pub case_label: String,
    pub seed: u64,
    pub budget: Budget,
    pub universe_digest: String,
    pub stages: Vec<StageCount>,
    pub survivors: Vec<SurvivorRecord>,
    pub witness_total: u64,
    /// First [`WITNESS_SAMPLE_CAP`] witnesses in scan order; the full
    /// stream lives in the evidence bundle.
    pub witness_sample: Vec<WitnessRecord>,
    pub witnesses_truncated: bool,
    /// True when every survivor claim carries an exact certificate.
    pub all_survivors_exact: bool,
    /// True when every refuted candidate carries a verified witness or
    /// an exact certificate.
    pub all_rejects_verified: bool,
    pub coverage: Coverage,
    pub resume: Option<ResumeToken>,
}

impl SearchReport {
    pub fn new(op: &str, case_label: &str, seed: u64, budget: Budget, digest: &str) -> Self {
        SearchReport {
            version: EVIDENCE_FORMAT_VERSION,
            op: op.to_string(),
            case_label: case_label.to_string(),
            seed,
            budget,
            universe_digest: digest.to_string(),
            stages: Vec::new(),
            survivors: Vec::new(),
            witness_total: 0,
            witness_sample: Vec::new(),
            witnesses_truncated: false,
            all_survivors_exact: false,
            all_rejects_verified: false,
            coverage: Coverage::default(),
            resume: None,
        }
    }

    pub fn push_witness(&mut self, rec: WitnessRecord) {
        self.witness_total += 1;
        if self.witness_sample.len() < WITNESS_SAMPLE_CAP {
            self.witness_sample.push(rec);
        } else {
            self.witnesses_truncated = true;
        }
    }
}

/// Digest-stamped entry of the evidence manifest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileInfo {
    pub file: String,
    pub sha256: String,
    pub lines: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvidenceManifest {
    pub version: u32,
    pub seed: u64,
    pub universe_digest: String,
    /// Stage key (for witness shards: "base", "stage_a", "stage_b",
    /// "f6") or record-file key ("b9036_orbits", "stage_a_survivors",
    /// report names) to file info.
    pub files: BTreeMap<String, Vec<FileInfo>>,
}

impl EvidenceManifest {
    pub fn new(seed: u64, universe_digest: String) -> Self {
        EvidenceManifest {
            version: EVIDENCE_FORMAT_VERSION,
            seed,
            universe_digest,
            files: BTreeMap::new(),
        }
    }

    pub fn load(dir: &Path) -> std::io::Result<Self> {
        let raw = std::fs::read_to_string(dir.join("manifest.json"))?;
        serde_json::from_str(&raw).map_err(|e| std::io::Error::other(e.to_string()))
    }

    pub fn save(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(self).unwrap())
    }

    pub fn add(&mut self, key: &str, info: FileInfo) {
        self.files.entry(key.to_string()).or_default().push(info);
    }
}

/// Streams witness lines of one stage into a digest-stamped CSV shard.
///
/// Line format: `kind,a_idx,m2_idx,template_idx,m1_idx,weight,iteration,
/// word_hex`, blank for inapplicable fields. One shard per resume
/// segment, so continuing a truncated run never rewrites earlier files.
pub struct WitnessShard {
    path: PathBuf,
    name: String,
    writer: BufWriter<File>,
    hasher: Sha256,
    lines: u64,
}

pub const WITNESS_CSV_HEADER: &str =
    "kind,a_idx,m2_idx,template_idx,m1_idx,weight,iteration,word_hex";

impl WitnessShard {
    pub fn create(dir: &Path, stage: &str, segment: u64) -> std::io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        let name = format!("{stage}_witnesses_{segment:04}.csv");
        let path = dir.join(&name);
        let file = File::create_new(&path)?;
        let mut shard = WitnessShard {
            path,
            name,
            writer: BufWriter::new(file),
            hasher: Sha256::new(),
            lines: 0,
        };
        shard.line(WITNESS_CSV_HEADER)?;
        Ok(shard)
    }

    fn line(&mut self, s: &str) -> std::io::Result<()> {
        self.writer.write_all(s.as_bytes())?;
        self.writer.write_all(b"\n")?;
        self.hasher.update(s.as_bytes());
        self.hasher.update(b"\n");
        self.lines += 1;
        Ok(())
    }

    pub fn push(&mut self, rec: &WitnessRecord) -> std::io::Result<()> {
        let (kind, a, m2, tp, m1) = descriptor_fields(&rec.descriptor);
        let row = format!(
            "{kind},{a},{m2},{tp},{m1},{},{},{}",
            rec.weight, rec.iteration, rec.word_hex
        );
        self.line(&row)
    }

    pub fn finish(mut self) -> std::io::Result<FileInfo> {
        self.writer.flush()?;
        Ok(FileInfo {
            file: self.name,
            sha256: super::glue::hex(&self.hasher.finalize()),
            lines: self.lines,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

pub fn descriptor_fields(d: &CandidateDescriptor) -> (&'static str, String, String, String, String) {
    match *d {
        CandidateDescriptor::Base9036 { a_idx, m2_idx } => {
            ("base", a_idx.to_string(), m2_idx.to_string(), String::new(), String::new())
        }
        CandidateDescriptor::StageA { a_idx, m2_idx, template_idx } => (
            "stage_a",
            a_idx.to_string(),
            m2_idx.to_string(),
            template_idx.to_string(),
            String::new(),
        ),
        CandidateDescriptor::StageB { a_idx, m2_idx, template_idx, m1_idx } => (
            "stage_b",
            a_idx.to_string(),
            m2_idx.to_string(),
            template_idx.to_string(),
            m1_idx.to_string(),
        ),
        CandidateDescriptor::CaseF6 { a_idx, m2_idx, m1_idx } => (
            "f6",
            a_idx.to_string(),
            m2_idx.to_string(),
            String::new(),
            m1_idx.to_string(),
        ),
    }
}

pub fn descriptor_from_fields(
    kind: &str,
    a: &str,
    m2: &str,
    tp: &str,
    m1: &str,
) -> Option<CandidateDescriptor> {
    let a_idx: u32 = a.parse().ok()?;
    let m2_idx: u32 = m2.parse().ok()?;
    Some(match kind {
        "base" => CandidateDescriptor::Base9036 { a_idx, m2_idx },
        "stage_a" => {
            CandidateDescriptor::StageA { a_idx, m2_idx, template_idx: tp.parse().ok()? }
        }
        "stage_b" => CandidateDescriptor::StageB {
            a_idx,
            m2_idx,
            template_idx: tp.parse().ok()?,
            m1_idx: m1.parse().ok()?,
        },
        "f6" => CandidateDescriptor::CaseF6 { a_idx, m2_idx, m1_idx: m1.parse().ok()? },
        _ => return None,
    })
}

/// Parse one shard line back into a witness record.
pub fn parse_witness_line(line: &str) -> Option<WitnessRecord> {
    let mut it = line.split(',');
    let kind = it.next()?;
    let a = it.next()?;
    let m2 = it.next()?;
    let tp = it.next()?;
    let m1 = it.next()?;
    let weight: u32 = it.next()?.parse().ok()?;
    let iteration: u64 = it.next()?.parse().ok()?;
    let word_hex = it.next()?.to_string();
    if it.next().is_some() || word_hex.len() != 32 {
        return None;
    }
    Some(WitnessRecord {
        descriptor: descriptor_from_fields(kind, a, m2, tp, m1)?,
        weight,
        iteration,
        word_hex,
    })
}

pub fn save_json<T: Serialize>(path: &Path, value: &T) -> std::io::Result<FileInfo> {
    let body = serde_json::to_string_pretty(value).unwrap();
    std::fs::write(path, &body)?;
    let mut h = Sha256::new();
    h.update(body.as_bytes());
    Ok(FileInfo {
        file: path.file_name().unwrap().to_string_lossy().into_owned(),
        sha256: super::glue::hex(&h.finalize()),
        lines: 0,
    })
}

pub fn load_json<T: for<'de> Deserialize<'de>>(path: &Path) -> std::io::Result<T> {
    let raw = std::fs::read_to_string(path)?;
    serde_json::from_str(&raw).map_err(|e| std::io::Error::other(format!("{path:?}: {e}")))
}

/// Digest of a file exactly as the shard writer computed it.
pub fn file_digest(path: &Path) -> std::io::Result<String> {
    let body = std::fs::read(path)?;
    let mut h = Sha256::new();
    h.update(&body);
    Ok(super::glue::hex(&h.finalize()))
}
