//! Batched translation with retry, bounded concurrency, and order-preserving
//! reassembly.
//!
//! The machine-translation model is an external service behind the
//! [`TranslationBackend`] trait. Production use talks to an HTTP endpoint;
//! tests and offline runs use the mock backends. Batches are retried as a
//! unit with exponential backoff; exhausted batches land in a failure
//! manifest instead of aborting the run, because multi-million-segment jobs
//! must survive transient errors.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::corpus::{Document, Segment};
use crate::error::{Error, Result};

/// One batch of segments sent to a backend.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationRequest {
    pub segment_ids: Vec<String>,
    pub texts: Vec<String>,
    pub src_lang: String,
    pub tgt_lang: String,
}

/// A successfully translated segment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslatedSegment {
    pub segment_id: String,
    pub source_text: String,
    pub translated_text: String,
    pub backend_name: String,
    pub attempt_count: u32,
}

/// A batch that exhausted its retries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchFailure {
    pub segment_ids: Vec<String>,
    pub attempts: u32,
    pub error: String,
}

/// Outcome of a full translation run: successes in input order plus the
/// failure manifest.
#[derive(Debug, Default)]
pub struct TranslationRun {
    pub translated: Vec<TranslatedSegment>,
    pub failures: Vec<BatchFailure>,
}

/// Batch-level retry policy. A batch is attempted at most
/// `max_retries + 1` times; the delay doubles after every failed attempt.
#[derive(Debug, Clone)]
pub struct RetryPolicy {
    pub max_retries: u32,
    pub initial_backoff: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            max_retries: 3,
            initial_backoff: Duration::from_millis(250),
        }
    }
}

impl RetryPolicy {
    fn backoff_for(&self, failed_attempts: u32) -> Duration {
        self.initial_backoff
            .saturating_mul(2u32.saturating_pow(failed_attempts.saturating_sub(1)))
    }
}

/// A translation service. Implementations must be safe for concurrent use;
/// `translate_batch` returns one translation per input text or fails the
/// whole batch.
pub trait TranslationBackend: Send + Sync {
    fn name(&self) -> &str;
    fn translate_batch(&self, request: &TranslationRequest) -> Result<Vec<String>>;
}

/// HTTP JSON backend: `POST {base_url}/translate` with
/// `{"texts": [...], "src": ..., "tgt": ...}`, expecting a 200 response of
/// `{"translations": [...]}` with one entry per input. Anything else fails
/// the batch.
pub struct HttpBackend {
    base_url: String,
    client: reqwest::blocking::Client,
}

#[derive(Serialize)]
struct HttpRequestBody<'a> {
    texts: &'a [String],
    src: &'a str,
    tgt: &'a str,
}

#[derive(Deserialize)]
struct HttpResponseBody {
    translations: Vec<String>,
}

/// Environment variable carrying the backend base URL.
pub const MT_URL_ENV: &str = "MEDCORPUS_MT_URL";

impl HttpBackend {
    pub fn new(base_url: impl Into<String>) -> Result<Self> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(120))
            .build()
            .map_err(|e| Error::Backend(e.to_string()))?;
        Ok(Self {
            base_url: base_url.into().trim_end_matches('/').to_string(),
            client,
        })
    }

    /// Construct from `MEDCORPUS_MT_URL`.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MT_URL_ENV) {
            Ok(url) if !url.is_empty() => Self::new(url),
            _ => Err(Error::Config(format!(
                "http backend selected but {MT_URL_ENV} is not set"
            ))),
        }
    }
}

impl TranslationBackend for HttpBackend {
    fn name(&self) -> &str {
        "http"
    }

    fn translate_batch(&self, request: &TranslationRequest) -> Result<Vec<String>> {
        let url = format!("{}/translate", self.base_url);
        let body = HttpRequestBody {
            texts: &request.texts,
            src: &request.src_lang,
            tgt: &request.tgt_lang,
        };
        let response = self
            .client
            .post(&url)
            .json(&body)
            .send()
            .map_err(|e| Error::Backend(e.to_string()))?;
        let status = response.status();
        if !status.is_success() {
            return Err(Error::Backend(format!("{url} returned {status}")));
        }
        let parsed: HttpResponseBody = response
            .json()
            .map_err(|e| Error::Backend(format!("bad response body: {e}")))?;
        if parsed.translations.len() != request.texts.len() {
            return Err(Error::Backend(format!(
                "length mismatch: sent {} texts, got {} translations",
                request.texts.len(),
                parsed.translations.len()
            )));
        }
        Ok(parsed.translations)
    }
}

/// Offline mock: echoes the input texts back.
pub struct EchoBackend;

impl TranslationBackend for EchoBackend {
    fn name(&self) -> &str {
        "mock-echo"
    }

    fn translate_batch(&self, request: &TranslationRequest) -> Result<Vec<String>> {
        Ok(request.texts.clone())
    }
}

/// Fault-injection mock: each batch fails its first `fail_first` attempts,
/// then succeeds by echoing. Optional per-call jitter perturbs completion
/// order under concurrency.
pub struct ScriptedBackend {
    fail_first: u32,
    attempts: Mutex<BTreeMap<String, u32>>,
    jitter: Option<u64>,
}

impl ScriptedBackend {
    pub fn failing_first(fail_first: u32) -> Self {
        Self {
            fail_first,
            attempts: Mutex::new(BTreeMap::new()),
            jitter: None,
        }
    }

    /// Always fails, regardless of retries.
    pub fn always_failing() -> Self {
        Self::failing_first(u32::MAX)
    }

    /// Sleep a pseudo-random 0..max_ms before answering, keyed off the batch
    /// identity, to randomize completion order across worker threads.
    pub fn with_jitter(mut self, max_ms: u64) -> Self {
        self.jitter = Some(max_ms);
        self
    }
}

impl TranslationBackend for ScriptedBackend {
    fn name(&self) -> &str {
        "mock-scripted"
    }

    fn translate_batch(&self, request: &TranslationRequest) -> Result<Vec<String>> {
        let key = request
            .segment_ids
            .first()
            .cloned()
            .unwrap_or_default();
        if let Some(max_ms) = self.jitter {
            if max_ms > 0 {
                let mut h = 0xcbf29ce484222325u64; // FNV-1a over the key
                for b in key.as_bytes() {
                    h ^= u64::from(*b);
                    h = h.wrapping_mul(0x100000001b3);
                }
                std::thread::sleep(Duration::from_millis(h % max_ms));
            }
        }
        let mut attempts = self.attempts.lock().expect("attempts lock");
        let n = attempts.entry(key).or_insert(0);
        *n += 1;
        if *n <= self.fail_first {
            return Err(Error::Backend(format!("scripted failure #{n}")));
        }
        Ok(request.texts.clone())
    }
}

/// Slice segments into consecutive batches of `batch_size` (the last batch
/// may be short). Concatenating the batches reproduces the input order.
pub fn plan_batches(
    segments: &[Segment],
    batch_size: usize,
    src_lang: &str,
    tgt_lang: &str,
) -> Result<Vec<TranslationRequest>> {
    if batch_size < 1 {
        return Err(Error::Config("batch-size must be at least 1".into()));
    }
    Ok(segments
        .chunks(batch_size)
        .map(|chunk| TranslationRequest {
            segment_ids: chunk.iter().map(Segment::uid).collect(),
            texts: chunk.iter().map(|s| s.text.clone()).collect(),
            src_lang: src_lang.to_string(),
            tgt_lang: tgt_lang.to_string(),
        })
        .collect())
}

enum BatchOutcome {
    Done(Vec<TranslatedSegment>),
    Failed(BatchFailure),
}

fn run_batch(
    request: &TranslationRequest,
    backend: &dyn TranslationBackend,
    policy: &RetryPolicy,
) -> BatchOutcome {
    let mut last_error = String::new();
    for attempt in 1..=policy.max_retries.saturating_add(1) {
        match backend.translate_batch(request) {
            Ok(translations) => {
                let translated = request
                    .segment_ids
                    .iter()
                    .zip(&request.texts)
                    .zip(translations)
                    .map(|((id, source_text), translated_text)| TranslatedSegment {
                        segment_id: id.clone(),
                        source_text: source_text.clone(),
                        translated_text,
                        backend_name: backend.name().to_string(),
                        attempt_count: attempt,
                    })
                    .collect();
                return BatchOutcome::Done(translated);
            }
            Err(e) => {
                last_error = e.to_string();
                if attempt <= policy.max_retries {
                    std::thread::sleep(policy.backoff_for(attempt));
                }
            }
        }
    }
    BatchOutcome::Failed(BatchFailure {
        segment_ids: request.segment_ids.clone(),
        attempts: policy.max_retries + 1,
        error: last_error,
    })
}

/// Translate all batches with at most `max_in_flight` concurrent requests.
///
/// Output order equals input order regardless of completion order: results
/// are written into per-batch slots and flattened afterwards. Each batch is
/// attempted exactly once per retry round, so no segment can appear twice.
pub fn translate_all(
    requests: &[TranslationRequest],
    backend: &dyn TranslationBackend,
    policy: &RetryPolicy,
    max_in_flight: usize,
) -> Result<TranslationRun> {
    if max_in_flight < 1 {
        return Err(Error::Config("max-in-flight must be at least 1".into()));
    }
    let slots: Vec<Mutex<Option<BatchOutcome>>> =
        requests.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = max_in_flight.min(requests.len());

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= requests.len() {
                    break;
                }
                let outcome = run_batch(&requests[i], backend, policy);
                *slots[i].lock().expect("slot lock") = Some(outcome);
            });
        }
    });

    let mut run = TranslationRun::default();
    for slot in slots {
        match slot.into_inner().expect("slot lock").expect("batch completed") {
            BatchOutcome::Done(mut batch) => run.translated.append(&mut batch),
            BatchOutcome::Failed(failure) => run.failures.push(failure),
        }
    }
    Ok(run)
}

/// Rebuild translated documents from translated segments.
///
/// Documents come back in the order of their first segment in `originals`;
/// per document, translated texts are joined with newlines in segment order.
/// Every original segment must have exactly one translation.
pub fn reassemble(
    translated: &[TranslatedSegment],
    originals: &[Segment],
) -> Result<Vec<Document>> {
    let by_id: BTreeMap<&str, &TranslatedSegment> = translated
        .iter()
        .map(|t| (t.segment_id.as_str(), t))
        .collect();

    let mut doc_order: Vec<&str> = Vec::new();
    let mut grouped: BTreeMap<&str, Vec<&Segment>> = BTreeMap::new();
    for segment in originals {
        let entry = grouped.entry(segment.doc_id.as_str()).or_default();
        if entry.is_empty() {
            doc_order.push(&segment.doc_id);
        }
        entry.push(segment);
    }

    let mut documents = Vec::with_capacity(doc_order.len());
    for doc_id in doc_order {
        let mut segments = grouped.remove(doc_id).unwrap_or_default();
        segments.sort_by_key(|s| s.index);
        let mut parts = Vec::with_capacity(segments.len());
        for segment in &segments {
            let uid = segment.uid();
            let t = by_id.get(uid.as_str()).ok_or(Error::MissingTranslation {
                segment_id: uid.clone(),
            })?;
            parts.push(t.translated_text.as_str());
        }
        let mut meta = BTreeMap::new();
        meta.insert("translated".to_string(), "true".to_string());
        documents.push(Document {
            id: doc_id.to_string(),
            source: segments.first().map(|s| s.source.clone()).unwrap_or_default(),
            text: parts.join("\n"),
            meta,
        });
    }
    Ok(documents)
}
