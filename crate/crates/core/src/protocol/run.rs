//! End-to-end key agreement: sample, test, sift, reconcile, amplify.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::estimate::{estimate_parameters, Estimates};
use super::gf2::{decode, privacy_amplify, syndrome, BitMatrix};
use super::keyrate::{key_distance_bound, key_rate};
use super::sampling::{Round, Sampler};
use crate::boxcore::{apply_output_noise, depolarize, make_quantum_box, make_singlet_box, ConditionalBox};
use crate::error::{domain, Error, Result};
use crate::scalar::binary_entropy;

/// Acceptable fraction of ones in each party's test outputs.
pub const BALANCE_WINDOW: (f64, f64) = (0.4, 0.6);

/// Draw budget per requested round before giving up on sifting.
pub const SIFT_OVERSAMPLING: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// Error `delta` at inputs (0,0), `noise` on the other inputs.
    Quantum { delta: f64, noise: f64 },
    /// Measurement angles in degrees and an independent output flip probability.
    Singlet { angles: [f64; 4], flip: f64 },
}

impl Source {
    pub fn build(&self) -> Result<ConditionalBox<f64>> {
        match self {
            Source::Quantum { delta, noise } => make_quantum_box(*delta, *noise),
            Source::Singlet { angles, flip } => apply_output_noise(&make_singlet_box(*angles), *flip),
        }
    }
}

/// Requested key length, or `auto` to take ⌊n·q⌋ from the estimated rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KeyLength {
    #[default]
    Auto,
    Fixed(usize),
}

impl Serialize for KeyLength {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            KeyLength::Auto => s.serialize_str("auto"),
            KeyLength::Fixed(n) => s.serialize_u64(*n as u64),
        }
    }
}

impl<'de> Deserialize<'de> for KeyLength {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) if s == "auto" => Ok(KeyLength::Auto),
            serde_json::Value::Number(n) if n.as_u64().is_some() => {
                Ok(KeyLength::Fixed(n.as_u64().unwrap_or_default() as usize))
            }
            other => Err(serde::de::Error::custom(format!("key length must be \"auto\" or a count, got {other}"))),
        }
    }
}

fn default_slack() -> f64 {
    0.02
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    /// Raw key length.
    pub n: usize,
    /// Test sample size.
    pub k: usize,
    pub source: Source,
    #[serde(default)]
    pub s: KeyLength,
    pub seed: u64,
    /// Added to ε̂ before the feasibility test and the key-length choice.
    #[serde(default = "default_slack")]
    pub slack: f64,
    /// Added to δ̂ likewise.
    #[serde(default)]
    pub delta_slack: f64,
    /// Sample from the depolarized source instead of the source itself.
    #[serde(default)]
    pub depolarize: bool,
}

impl ProtocolConfig {
    pub fn noiseless(n: usize, k: usize, seed: u64) -> Self {
        Self {
            n,
            k,
            source: Source::Quantum { delta: 0.0, noise: 0.0 },
            s: KeyLength::Auto,
            seed,
            slack: default_slack(),
            delta_slack: 0.0,
            depolarize: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(domain("raw key length n must be at least 1"));
        }
        for (name, p) in [("slack", self.slack), ("delta_slack", self.delta_slack)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(domain(format!("{name} = {p} is outside [0, 1]")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub config: ProtocolConfig,
    /// Every drawn round in order; the first k are the test sample.
    pub rounds: Vec<Round>,
    pub raw_key_indices: Vec<usize>,
    pub estimates: Option<Estimates>,
    pub aborted: bool,
    pub abort_reason: Option<String>,
    pub m: usize,
    pub s: usize,
    pub reconciliation_rows: BitMatrix,
    pub syndrome: Vec<u8>,
    pub amplification_rows: BitMatrix,
    pub raw_key_alice: Vec<u8>,
    pub raw_key_bob: Vec<u8>,
    pub corrected_key_bob: Vec<u8>,
    pub key_alice: Vec<u8>,
    pub key_bob: Vec<u8>,
    /// Distance of the key from uniform given everything Eve sees.
    pub distance_bound: Option<f64>,
}

impl Transcript {
    fn started(config: &ProtocolConfig) -> Self {
        Self {
            config: config.clone(),
            rounds: Vec::new(),
            raw_key_indices: Vec::new(),
            estimates: None,
            aborted: false,
            abort_reason: None,
            m: 0,
            s: 0,
            reconciliation_rows: Vec::new(),
            syndrome: Vec::new(),
            amplification_rows: Vec::new(),
            raw_key_alice: Vec::new(),
            raw_key_bob: Vec::new(),
            corrected_key_bob: Vec::new(),
            key_alice: Vec::new(),
            key_bob: Vec::new(),
            distance_bound: None,
        }
    }

    fn abort(mut self, reason: impl Into<String>) -> Self {
        self.aborted = true;
        self.abort_reason = Some(reason.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("transcript: {e}")))
    }
}

/// Runs the protocol with a ChaCha20 stream seeded from `config.seed`.
pub fn run_protocol(config: &ProtocolConfig) -> Result<Transcript> {
    run_protocol_with(config, &mut ChaCha20Rng::seed_from_u64(config.seed))
}

/// Randomness is consumed in this order: the k test rounds, key-candidate
/// rounds until n of them have inputs (0,0), then the (m+s)×n hash matrix
/// row by row.
pub fn run_protocol_with<R: RngCore + ?Sized>(config: &ProtocolConfig, rng: &mut R) -> Result<Transcript> {
    config.validate()?;
    let (n, k) = (config.n, config.k);
    let mut source = config.source.build()?;
    if config.depolarize {
        source = depolarize(&source);
    }
    let sampler = Sampler::new(&source)?;
    let mut t = Transcript::started(config);

    t.rounds = (0..k).map(|_| sampler.draw(rng)).collect();
    let cap = SIFT_OVERSAMPLING * (n + k);
    while t.raw_key_indices.len() < n {
        if t.rounds.len() >= cap {
            let got = t.raw_key_indices.len();
            return Ok(t.abort(format!("insufficient sift: {got} of {n} key rounds in {cap} draws")));
        }
        let r = sampler.draw(rng);
        if r.is_key_round() {
            t.raw_key_indices.push(t.rounds.len());
        }
        t.rounds.push(r);
    }

    if k == 0 {
        return Ok(t.abort("empty test sample"));
    }
    let est = estimate_parameters(&t.rounds[..k], config.slack)?;
    t.estimates = Some(est.clone());
    let Some(delta_hat) = est.delta_hat else {
        return Ok(t.abort("no test rounds with inputs (0,0): delta undefined"));
    };
    let (lo, hi) = BALANCE_WINDOW;
    if !(lo..=hi).contains(&est.alice_ones) || !(lo..=hi).contains(&est.bob_ones) {
        return Ok(t.abort(format!(
            "unbalanced outputs: {:.4} / {:.4} ones outside [{lo}, {hi}]",
            est.alice_ones, est.bob_ones
        )));
    }
    let eps = (est.epsilon_hat + config.slack).min(1.0);
    let delta = (delta_hat + config.delta_slack).min(1.0);
    let rate = key_rate(eps, delta)?;
    if rate <= 0.0 {
        return Ok(t.abort(format!("outside feasible region: rate {rate:.6} at epsilon {eps:.6}, delta {delta:.6}")));
    }

    let m = ((n as f64 * binary_entropy(delta)).ceil() as usize).min(n);
    let s = match config.s {
        KeyLength::Auto => (n as f64 * rate).floor().max(0.0) as usize,
        KeyLength::Fixed(s) => s,
    };
    t.m = m;
    t.s = s;
    t.raw_key_alice = t.raw_key_indices.iter().map(|&i| t.rounds[i].x).collect();
    t.raw_key_bob = t.raw_key_indices.iter().map(|&i| t.rounds[i].y).collect();

    let mut matrix: BitMatrix = (0..m + s)
        .map(|_| (0..n).map(|_| u8::from(rng.random::<bool>())).collect())
        .collect();
    t.amplification_rows = matrix.split_off(m);
    t.reconciliation_rows = matrix;
    t.syndrome = syndrome(&t.raw_key_alice, &t.reconciliation_rows)?;
    t.corrected_key_bob = decode(&t.syndrome, &t.raw_key_bob, &t.reconciliation_rows)?;
    t.key_alice = privacy_amplify(&t.raw_key_alice, &t.amplification_rows)?;
    t.key_bob = privacy_amplify(&t.corrected_key_bob, &t.amplification_rows)?;
    t.distance_bound = Some(key_distance_bound(s, m, n, eps.min(0.25))?);
    Ok(t)
}
