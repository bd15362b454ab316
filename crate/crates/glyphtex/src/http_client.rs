//! Blocking JSON-over-HTTP POST shared by the remote clients.

use std::time::Duration;

/// Response bodies larger than this are refused.
const MAX_BODY_BYTES: u64 = 64 * 1024 * 1024;

#[derive(Debug)]
pub(crate) enum PostFailure {
    Timeout,
    Transport(String),
}

pub(crate) struct PostResponse {
    pub status: u16,
    pub body: Vec<u8>,
}

pub(crate) fn post_json(
    url: &str,
    payload: &serde_json::Value,
    timeout: Duration,
    bearer: Option<&str>,
) -> Result<PostResponse, PostFailure> {
    let agent: ureq::Agent = ureq::Agent::config_builder()
        .timeout_global(Some(timeout))
        .http_status_as_error(false)
        .build()
        .into();
    let mut request = agent.post(url).content_type("application/json");
    if let Some(token) = bearer {
        request = request.header("Authorization", format!("Bearer {token}"));
    }
    let body = serde_json::to_vec(payload).expect("JSON values always serialize");
    let mut response = request.send(&body[..]).map_err(classify)?;
    let status = response.status().as_u16();
    let body = response
        .body_mut()
        .with_config()
        .limit(MAX_BODY_BYTES)
        .read_to_vec()
        .map_err(classify)?;
    Ok(PostResponse { status, body })
}

fn classify(err: ureq::Error) -> PostFailure {
    match err {
        ureq::Error::Timeout(_) => PostFailure::Timeout,
        ureq::Error::Io(e) if e.kind() == std::io::ErrorKind::TimedOut => PostFailure::Timeout,
        other => PostFailure::Transport(other.to_string()),
    }
}

/// Shortens a rejected response body for error messages.
pub(crate) fn body_excerpt(body: &[u8]) -> String {
    let text = String::from_utf8_lossy(body);
    match text.char_indices().nth(2000) {
        Some((cut, _)) => format!("{}…", &text[..cut]),
        None => text.into_owned(),
    }
}
