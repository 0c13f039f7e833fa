//! Sources of new candidate programs.
//!
//! A mutator receives the prompt text and answers with text that should
//! contain one expression. [`StubMutator`] edits the last program in the
//! prompt locally and deterministically; [`HttpMutator`] forwards the prompt
//! to a remote text-completion endpoint.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{DiscoveryError, Result};
use crate::expr::{extract_expression, BinOp, PriorityExpr};
use crate::prompt::last_program;

pub trait Mutator {
    fn name(&self) -> &str;

    /// Candidate expression text for `prompt`.
    fn propose(&mut self, prompt: &str) -> Result<String>;
}

/// Scale factors used by the multiplier mutation.
pub const MULTIPLIERS: [f64; 9] = [1.1, 0.9, 1.2, 0.8, 1.05, 0.95, 1.5, 0.5, 2.0];

const CONSTANT_STEPS: [f64; 6] = [-0.2, -0.1, -0.05, 0.05, 0.1, 0.2];

const GRAFT_SNIPPETS: [&str; 11] = [
    "P",
    "D",
    "T",
    "MAXP",
    "MEANP",
    "REMAINING",
    "D - T",
    "0.1 * P",
    "P / (T + MEANP)",
    "sq(min(P / (T + MAXP), 1))",
    "max(P + T, D)",
];

const GRAFT_OPS: [BinOp; 5] = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Max, BinOp::Min];

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

/// Scales the pre-order node `index` by `factor`. A node that is already
/// `c * x` gets its constant rescaled instead of a second factor.
pub fn multiplier_mutation(expr: &PriorityExpr, index: usize, factor: f64) -> PriorityExpr {
    expr.replace_node(index, &mut |node| match node {
        PriorityExpr::Bin(BinOp::Mul, c, x) if matches!(**c, PriorityExpr::Const(_)) => {
            let PriorityExpr::Const(v) = **c else { unreachable!() };
            PriorityExpr::bin(BinOp::Mul, PriorityExpr::Const(round6(v * factor)), (**x).clone())
        }
        PriorityExpr::Const(v) => PriorityExpr::Const(round6(v * factor)),
        other => PriorityExpr::bin(BinOp::Mul, PriorityExpr::Const(factor), other.clone()),
    })
}

/// `index` of every node matching `pred`, in pre-order.
fn positions(expr: &PriorityExpr, pred: impl Fn(&PriorityExpr) -> bool) -> Vec<usize> {
    expr.nodes()
        .into_iter()
        .enumerate()
        .filter(|(_, n)| pred(n))
        .map(|(i, _)| i)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Edit {
    Multiplier,
    Constant,
    Graft,
    Prune,
}

/// Deterministic local mutator: same seed and same prompt sequence give the
/// same proposals.
#[derive(Debug, Clone)]
pub struct StubMutator {
    rng: ChaCha8Rng,
    max_depth: usize,
}

impl StubMutator {
    pub fn new(seed: u64, max_depth: usize) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_depth,
        }
    }

    fn pick_edit(&mut self) -> Edit {
        match self.rng.random_range(0..20) {
            0..=6 => Edit::Multiplier,
            7..=12 => Edit::Constant,
            13..=17 => Edit::Graft,
            _ => Edit::Prune,
        }
    }

    fn apply(&mut self, parent: &PriorityExpr, edit: Edit) -> PriorityExpr {
        let rng = &mut self.rng;
        match edit {
            Edit::Multiplier => {
                let mut spots = positions(parent, |n| matches!(n, PriorityExpr::Var(_)));
                if spots.is_empty() {
                    spots = (0..parent.size()).collect();
                }
                let index = *spots.choose(rng).expect("non-empty");
                let factor = *MULTIPLIERS.choose(rng).expect("non-empty");
                multiplier_mutation(parent, index, factor)
            }
            Edit::Constant => {
                let spots = positions(parent, |n| matches!(n, PriorityExpr::Const(_)));
                let Some(&index) = spots.choose(rng) else {
                    return self.apply(parent, Edit::Multiplier);
                };
                let step = *CONSTANT_STEPS.choose(rng).expect("non-empty");
                parent.replace_node(index, &mut |node| match node {
                    PriorityExpr::Const(0.0) => PriorityExpr::Const(step),
                    PriorityExpr::Const(v) => PriorityExpr::Const(round6(v * (1.0 + step))),
                    other => other.clone(),
                })
            }
            Edit::Graft => {
                let index = rng.random_range(0..parent.size());
                let op = *GRAFT_OPS.choose(rng).expect("non-empty");
                let snippet: PriorityExpr = GRAFT_SNIPPETS
                    .choose(rng)
                    .expect("non-empty")
                    .parse()
                    .expect("valid snippet");
                parent.replace_node(index, &mut |node| PriorityExpr::bin(op, node.clone(), snippet.clone()))
            }
            Edit::Prune => {
                let spots = positions(parent, |n| matches!(n, PriorityExpr::Bin(..) | PriorityExpr::Square(_)));
                let Some(&index) = spots.choose(rng) else {
                    return self.apply(parent, Edit::Multiplier);
                };
                let left = rng.random_bool(0.5);
                parent.replace_node(index, &mut |node| match node {
                    PriorityExpr::Bin(_, a, b) => if left { (**a).clone() } else { (**b).clone() },
                    PriorityExpr::Square(a) => (**a).clone(),
                    other => other.clone(),
                })
            }
        }
    }
}

impl Mutator for StubMutator {
    fn name(&self) -> &str {
        "stub"
    }

    fn propose(&mut self, prompt: &str) -> Result<String> {
        let text = last_program(prompt).ok_or(DiscoveryError::NoExpression)?;
        let parent: PriorityExpr = text.parse()?;
        for _ in 0..8 {
            let edit = self.pick_edit();
            let child = self.apply(&parent, edit);
            if child.depth() <= self.max_depth && child != parent {
                return Ok(child.to_string());
            }
        }
        Err(DiscoveryError::Mutator("no edit within the depth limit".into()))
    }
}

/// Default environment variable holding the endpoint's bearer token.
pub const DEFAULT_TOKEN_ENV: &str = "SMTT_MUTATOR_TOKEN";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HttpConfig {
    /// URL that accepts the prompt as a `text/plain` POST body and answers
    /// with text.
    pub endpoint: String,
    /// Name of the environment variable with the bearer token; the request
    /// goes out unauthenticated when it is unset.
    pub token_env: String,
    pub timeout_secs: u64,
    /// Extra attempts after a failed request.
    pub retries: u32,
}

impl Default for HttpConfig {
    fn default() -> Self {
        Self {
            endpoint: "http://127.0.0.1:8080/v1/complete".into(),
            token_env: DEFAULT_TOKEN_ENV.into(),
            timeout_secs: 60,
            retries: 2,
        }
    }
}

pub struct HttpMutator {
    config: HttpConfig,
    agent: ureq::Agent,
    token: Option<String>,
}

impl fmt::Debug for HttpMutator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HttpMutator")
            .field("config", &self.config)
            .field("token", &self.token.as_ref().map(|_| "<redacted>"))
            .finish()
    }
}

impl HttpMutator {
    /// Reads the token from the configured environment variable.
    pub fn new(config: HttpConfig) -> Self {
        let token = std::env::var(&config.token_env).ok().filter(|t| !t.is_empty());
        Self::with_token(config, token)
    }

    pub fn with_token(config: HttpConfig, token: Option<String>) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(config.timeout_secs.max(1))))
            .build()
            .into();
        Self { config, agent, token }
    }

    fn request(&self, prompt: &str) -> std::result::Result<String, ureq::Error> {
        let mut req = self
            .agent
            .post(&self.config.endpoint)
            .header("Content-Type", "text/plain; charset=utf-8");
        if let Some(token) = &self.token {
            req = req.header("Authorization", &format!("Bearer {token}"));
        }
        req.send(prompt)?.body_mut().read_to_string()
    }
}

impl Mutator for HttpMutator {
    fn name(&self) -> &str {
        "http"
    }

    fn propose(&mut self, prompt: &str) -> Result<String> {
        log::debug!(
            "mutator request to {} (authorization: {}):\n{prompt}",
            self.config.endpoint,
            if self.token.is_some() { "bearer <redacted>" } else { "none" }
        );
        let mut last_error = None;
        for attempt in 0..=self.config.retries {
            match self.request(prompt) {
                Ok(reply) => {
                    log::debug!("mutator reply:\n{reply}");
                    return extract_expression(&reply)
                        .map(|e| e.to_string())
                        .ok_or(DiscoveryError::NoExpression);
                }
                Err(e) => {
                    log::warn!("mutator request attempt {} failed: {e}", attempt + 1);
                    last_error = Some(e);
                }
            }
        }
        Err(DiscoveryError::Mutator(
            last_error.map(|e| e.to_string()).unwrap_or_default(),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutatorKind {
    Stub,
    Http,
}

impl fmt::Display for MutatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MutatorKind::Stub => "stub",
            MutatorKind::Http => "http",
        })
    }
}

impl FromStr for MutatorKind {
    type Err = DiscoveryError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "stub" => Ok(MutatorKind::Stub),
            "http" => Ok(MutatorKind::Http),
            other => Err(DiscoveryError::Config(format!("unknown mutator {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prompt::render_prompt;
    use crate::sandbox::ScoredProgram;
    use std::io::{Read, Write};
    use std::net::TcpListener;

    fn prompt_for(text: &str) -> String {
        render_prompt(&[ScoredProgram::new(text.parse().unwrap(), 1.0, 0, 0)])
    }

    #[test]
    fn multiplier_on_the_mdd_processing_time() {
        let out = multiplier_mutation(&PriorityExpr::mdd(), 2, 1.1);
        assert_eq!(out.to_string(), "max(1.1 * P + T, D)");
        let again = multiplier_mutation(&out, 2, 2.0);
        assert_eq!(again.to_string(), "max(2.2 * P + T, D)");
    }

    #[test]
    fn stub_is_deterministic() {
        let prompt = prompt_for("max(P + T, D)");
        let mut a = StubMutator::new(11, 8);
        let mut b = StubMutator::new(11, 8);
        for _ in 0..20 {
            assert_eq!(a.propose(&prompt).unwrap(), b.propose(&prompt).unwrap());
        }
    }

    #[test]
    fn stub_proposals_parse_and_respect_depth() {
        let mut stub = StubMutator::new(5, 6);
        let mut current = "max(P + T, D)".to_string();
        for _ in 0..200 {
            let next = stub.propose(&prompt_for(&current)).unwrap();
            let e: PriorityExpr = next.parse().unwrap();
            assert!(e.depth() <= 6);
            current = next;
        }
    }

    #[test]
    fn stub_needs_a_program_line() {
        let mut stub = StubMutator::new(0, 8);
        assert!(stub.propose("nothing to mutate").is_err());
    }

    fn one_shot_server(reply: &'static str) -> (String, std::thread::JoinHandle<String>) {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let url = format!("http://{}/complete", listener.local_addr().unwrap());
        let handle = std::thread::spawn(move || {
            let (mut stream, _) = listener.accept().unwrap();
            let mut buf = vec![0u8; 65536];
            let mut request = Vec::new();
            loop {
                let n = stream.read(&mut buf).unwrap();
                request.extend_from_slice(&buf[..n]);
                let text = String::from_utf8_lossy(&request);
                if let Some(head_end) = text.find("\r\n\r\n") {
                    let len = text[..head_end]
                        .lines()
                        .find_map(|l| l.to_ascii_lowercase().strip_prefix("content-length:").map(|v| v.trim().parse::<usize>().unwrap()))
                        .unwrap_or(0);
                    if request.len() >= head_end + 4 + len {
                        break;
                    }
                }
                if n == 0 {
                    break;
                }
            }
            let response = format!(
                "HTTP/1.1 200 OK\r\nContent-Type: text/plain\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{reply}",
                reply.len()
            );
            stream.write_all(response.as_bytes()).unwrap();
            String::from_utf8_lossy(&request).into_owned()
        });
        (url, handle)
    }

    #[test]
    fn http_reply_is_parsed() {
        let (url, server) = one_shot_server("Sure.\npriority_v2: max(1.1 * P + T, D)\n");
        let config = HttpConfig {
            endpoint: url,
            retries: 0,
            timeout_secs: 5,
            ..HttpConfig::default()
        };
        let mut m = HttpMutator::with_token(config, Some("s3cret".into()));
        assert_eq!(m.propose("prompt body").unwrap(), "max(1.1 * P + T, D)");
        let request = server.join().unwrap();
        assert!(request.contains("Bearer s3cret"));
        assert!(request.ends_with("prompt body"));
        assert!(!format!("{m:?}").contains("s3cret"));
    }

    #[test]
    fn http_reply_without_expression_is_rejected() {
        let (url, server) = one_shot_server("I cannot help with that.");
        let config = HttpConfig {
            endpoint: url,
            retries: 0,
            timeout_secs: 5,
            ..HttpConfig::default()
        };
        let mut m = HttpMutator::with_token(config, None);
        assert!(matches!(m.propose("p"), Err(DiscoveryError::NoExpression)));
        server.join().unwrap();
    }

    #[test]
    fn unreachable_endpoint_is_an_error() {
        let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
        let config = HttpConfig {
            endpoint: format!("http://127.0.0.1:{port}/"),
            retries: 1,
            timeout_secs: 2,
            ..HttpConfig::default()
        };
        let mut m = HttpMutator::with_token(config, None);
        assert!(matches!(m.propose("p"), Err(DiscoveryError::Mutator(_))));
    }
}
