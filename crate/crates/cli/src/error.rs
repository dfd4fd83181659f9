use std::fmt;

use serde_json::json;

/// Process exit status classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Failure {
    Usage = 1,
    Data = 2,
    Fetch = 3,
}

impl Failure {
    pub fn name(self) -> &'static str {
        match self {
            Failure::Usage => "usage",
            Failure::Data => "data",
            Failure::Fetch => "fetch",
        }
    }
}

/// Marks an error with a non-default exit class; anything unmarked is a
/// data error.
#[derive(Debug)]
pub struct Classified {
    pub failure: Failure,
    pub message: String,
}

impl fmt::Display for Classified {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Classified {}

pub fn usage(message: impl Into<String>) -> anyhow::Error {
    Classified {
        failure: Failure::Usage,
        message: message.into(),
    }
    .into()
}

pub fn fetch(message: impl Into<String>) -> anyhow::Error {
    Classified {
        failure: Failure::Fetch,
        message: message.into(),
    }
    .into()
}

pub fn classify(err: &anyhow::Error) -> Failure {
    err.chain()
        .find_map(|e| e.downcast_ref::<Classified>())
        .map_or(Failure::Data, |c| c.failure)
}

/// The error and its causes, leaving out causes already quoted by the
/// message before them.
pub fn describe(err: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in err.chain() {
        let text = cause.to_string();
        if !out.contains(&text) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&text);
        }
    }
    out
}

/// One JSON object on one line: `{"error": class, "code": n, "message": text}`.
pub fn error_line(failure: Failure, message: &str) -> String {
    json!({
        "error": failure.name(),
        "code": failure as u8,
        "message": message.replace('\n', " "),
    })
    .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_survive_context() {
        let e = usage("bad flag").context("while parsing");
        assert_eq!(classify(&e), Failure::Usage);
        assert_eq!(classify(&anyhow::anyhow!("boom")), Failure::Data);
        let line = error_line(Failure::Fetch, "a\nb");
        let v: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(v["code"], 3);
        assert_eq!(v["message"], "a b");
        assert!(!line.contains('\n'));
        let io = std::io::Error::new(std::io::ErrorKind::NotFound, "gone");
        let e = anyhow::Error::new(io).context("x.json: gone").context("loading");
        assert_eq!(describe(&e), "loading: x.json: gone");
    }
}
