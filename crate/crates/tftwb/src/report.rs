use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// What a command prints on standard output. Everything except `timing_ms`
/// is a function of the arguments and the input bytes.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// A failure with the witness of the module that raised it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
    pub witness: String,
}

/// SHA-256 over every input in the order it was read. Each input is framed
/// by its label and length so that concatenations cannot collide.
#[derive(Clone, Default)]
pub struct InputDigest(Sha256);

impl InputDigest {
    pub fn add(&mut self, label: &str, bytes: &[u8]) {
        self.0.update((label.len() as u64).to_le_bytes());
        self.0.update(label.as_bytes());
        self.0.update((bytes.len() as u64).to_le_bytes());
        self.0.update(bytes);
    }

    pub fn finish(self) -> String {
        hex::encode(self.0.finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn framing_separates_inputs() {
        let mut a = InputDigest::default();
        a.add("x", b"ab");
        a.add("y", b"c");
        let mut b = InputDigest::default();
        b.add("x", b"a");
        b.add("y", b"bc");
        assert_ne!(a.finish(), b.finish());
        assert_eq!(InputDigest::default().finish().len(), 64);
    }
}
