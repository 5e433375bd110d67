//! ICY metadata block framing: one length byte `L` followed by `16·L` bytes of
//! NUL-padded `Key='value';` text.

use thiserror::Error;

const TITLE_KEY: &str = "StreamTitle='";
const TERMINATOR: &str = "';";

/// Largest title that still fits a 255·16 byte frame with its key and terminator.
pub const MAX_TITLE_BYTES: usize = 255 * 16 - TITLE_KEY.len() - TERMINATOR.len() - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IcyError {
    #[error("truncated ICY frame: length byte announces {expected} bytes, block has {actual}")]
    Truncated { expected: usize, actual: usize },
    #[error("title of {0} bytes does not fit one ICY frame (max {MAX_TITLE_BYTES})")]
    TitleTooLong(usize),
}

/// Decoded content of one metadata block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IcyPayload {
    /// Zero-length block.
    Empty,
    /// Value of the `StreamTitle` key.
    Title(String),
    /// The block carried text but no `StreamTitle` key.
    NoTitle,
}

impl IcyPayload {
    /// Title text, or `""` for empty and untitled blocks.
    pub fn into_text(self) -> String {
        match self {
            IcyPayload::Title(t) => t,
            IcyPayload::Empty | IcyPayload::NoTitle => String::new(),
        }
    }
}

pub fn parse_icy_metadata_block(block: &[u8]) -> Result<IcyPayload, IcyError> {
    let Some(&len_byte) = block.first() else {
        return Err(IcyError::Truncated { expected: 1, actual: 0 });
    };
    let payload_len = 16 * len_byte as usize;
    if block.len() < payload_len + 1 {
        return Err(IcyError::Truncated {
            expected: payload_len + 1,
            actual: block.len(),
        });
    }
    if payload_len == 0 {
        return Ok(IcyPayload::Empty);
    }
    let raw = &block[1..=payload_len];
    let end = raw.iter().rposition(|&b| b != 0).map_or(0, |p| p + 1);
    let text = String::from_utf8_lossy(&raw[..end]);
    Ok(extract_title(&text).map_or(IcyPayload::NoTitle, |t| IcyPayload::Title(t.to_string())))
}

/// Finds the `StreamTitle` value. Titles may contain `';`, so the terminator is
/// the first `';` that ends the text or is followed by another `Key='` pair.
fn extract_title(text: &str) -> Option<&str> {
    let start = text.find(TITLE_KEY)? + TITLE_KEY.len();
    let body = &text[start..];
    let mut from = 0;
    while let Some(pos) = body[from..].find(TERMINATOR) {
        let end = from + pos;
        let rest = &body[end + TERMINATOR.len()..];
        if rest.is_empty() || starts_with_key(rest) {
            return Some(&body[..end]);
        }
        from = end + 1;
    }
    // Unterminated value: take the remainder.
    Some(body)
}

fn starts_with_key(s: &str) -> bool {
    let key_len = s
        .bytes()
        .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
        .count();
    key_len > 0 && s[key_len..].starts_with("='")
}

/// Builds the block a station encoder would emit for `title`; `None` yields the
/// single zero byte of an empty block.
pub fn encode_icy_metadata_block(title: Option<&str>) -> Result<Vec<u8>, IcyError> {
    let Some(title) = title else {
        return Ok(vec![0]);
    };
    if title.len() > MAX_TITLE_BYTES {
        return Err(IcyError::TitleTooLong(title.len()));
    }
    let body = format!("{TITLE_KEY}{title}{TERMINATOR}");
    let blocks = body.len().div_ceil(16);
    let mut out = Vec::with_capacity(1 + blocks * 16);
    out.push(blocks as u8);
    out.extend_from_slice(body.as_bytes());
    out.resize(1 + blocks * 16, 0);
    Ok(out)
}
