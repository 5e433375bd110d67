use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DurationError {
    #[error("duration {text:?}: expected MM:SS or H:MM:SS")]
    Shape { text: String },
    #[error("duration {text:?}: bad token {token:?}")]
    Token { text: String, token: String },
}

/// Parses a track duration written as `MM:SS` or `H:MM:SS` into seconds.
pub fn parse_duration(text: &str) -> Result<u32, DurationError> {
    let parts: Vec<&str> = text.trim().split(':').collect();
    let bad = |token: &str| DurationError::Token {
        text: text.to_string(),
        token: token.to_string(),
    };
    let number = |token: &str, max: Option<u32>| -> Result<u32, DurationError> {
        if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad(token));
        }
        let value: u32 = token.parse().map_err(|_| bad(token))?;
        match max {
            Some(max) if value > max => Err(bad(token)),
            _ => Ok(value),
        }
    };
    match parts.as_slice() {
        [mm, ss] => {
            if ss.len() != 2 {
                return Err(bad(ss));
            }
            let minutes = number(mm, None)?;
            let seconds = number(ss, Some(59))?;
            minutes
                .checked_mul(60)
                .and_then(|m| m.checked_add(seconds))
                .ok_or_else(|| bad(mm))
        }
        [h, mm, ss] => {
            if mm.len() != 2 {
                return Err(bad(mm));
            }
            if ss.len() != 2 {
                return Err(bad(ss));
            }
            let hours = number(h, None)?;
            let minutes = number(mm, Some(59))?;
            let seconds = number(ss, Some(59))?;
            hours
                .checked_mul(3600)
                .and_then(|h| h.checked_add(minutes * 60 + seconds))
                .ok_or_else(|| bad(h))
        }
        _ => Err(DurationError::Shape { text: text.to_string() }),
    }
}

/// Inverse of [`parse_duration`]: `MM:SS` under an hour, `H:MM:SS` otherwise.
pub fn format_duration(seconds: u32) -> String {
    if seconds >= 3600 {
        format!("{}:{:02}:{:02}", seconds / 3600, (seconds % 3600) / 60, seconds % 60)
    } else {
        format!("{:02}:{:02}", seconds / 60, seconds % 60)
    }
}
