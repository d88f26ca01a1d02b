use std::time::Duration;

use thiserror::Error;

/// Placeholder substituted with the accession in endpoint templates.
pub const ACCESSION_PLACEHOLDER: &str = "{accession}";

pub const DEFAULT_ENDPOINT: &str =
    "https://eutils.ncbi.nlm.nih.gov/entrez/eutils/efetch.fcgi?db=nuccore&id={accession}&rettype=gb&retmode=text";

pub const ENDPOINT_ENV: &str = "HELIX_FETCH_URL";

// 1 GiB; no single record is anywhere near this.
const BODY_LIMIT: u64 = 1 << 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FetchError {
    #[error("endpoint template {0:?} must contain exactly one {{accession}} placeholder")]
    InvalidTemplate(String),
    #[error("transport error: {0}")]
    Transport(String),
    #[error("server answered with status {0}")]
    NonSuccessStatus(u16),
    #[error("request timed out after {0:?}")]
    Timeout(Duration),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FetchOptions {
    pub timeout: Duration,
}

impl Default for FetchOptions {
    fn default() -> Self {
        FetchOptions { timeout: Duration::from_secs(30) }
    }
}

/// Picks the endpoint template: explicit argument, then `HELIX_FETCH_URL`, then the default.
pub fn resolve_endpoint(explicit: Option<&str>) -> String {
    if let Some(t) = explicit {
        return t.to_string();
    }
    match std::env::var(ENDPOINT_ENV) {
        Ok(t) if !t.is_empty() => t,
        _ => DEFAULT_ENDPOINT.to_string(),
    }
}

fn render_url(accession: &str, template: &str) -> Result<String, FetchError> {
    if template.matches(ACCESSION_PLACEHOLDER).count() != 1 {
        return Err(FetchError::InvalidTemplate(template.to_string()));
    }
    Ok(template.replace(ACCESSION_PLACEHOLDER, accession))
}

/// Issues one blocking GET and returns the raw body. No retries, no parsing.
pub fn fetch_record(accession: &str, template: &str, options: &FetchOptions) -> Result<Vec<u8>, FetchError> {
    let url = render_url(accession, template)?;
    let agent: ureq::Agent =
        ureq::Agent::config_builder().timeout_global(Some(options.timeout)).http_status_as_error(false).build().into();
    let map_err = |e: ureq::Error| match e {
        ureq::Error::Timeout(_) => FetchError::Timeout(options.timeout),
        ureq::Error::Io(io) if io.kind() == std::io::ErrorKind::TimedOut => FetchError::Timeout(options.timeout),
        other => FetchError::Transport(other.to_string()),
    };
    let mut response = agent.get(&url).call().map_err(map_err)?;
    let status = response.status().as_u16();
    if !(200..300).contains(&status) {
        return Err(FetchError::NonSuccessStatus(status));
    }
    response.body_mut().with_config().limit(BODY_LIMIT).read_to_vec().map_err(map_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn template_needs_single_placeholder() {
        assert_eq!(render_url("X1", "http://h/?id={accession}").unwrap(), "http://h/?id=X1");
        assert!(matches!(render_url("X1", "http://h/"), Err(FetchError::InvalidTemplate(_))));
        assert!(matches!(render_url("X1", "http://h/{accession}/{accession}"), Err(FetchError::InvalidTemplate(_))));
    }

    #[test]
    fn explicit_endpoint_wins() {
        assert_eq!(resolve_endpoint(Some("http://x/{accession}")), "http://x/{accession}");
    }
}
