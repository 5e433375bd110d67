use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

fn is_dash(c: char) -> bool {
    matches!(
        c,
        '-' | '\u{2010}'..='\u{2015}' | '\u{2212}' | '\u{2E3A}' | '\u{2E3B}' | '\u{FE58}' | '\u{FE63}' | '\u{FF0D}'
    )
}

/// Canonical form used before comparing metadata strings: compatibility
/// decomposition, diacritics removed, lower-cased, dashes unified to `-`,
/// whitespace collapsed and trimmed.
pub fn normalize_string(s: &str) -> String {
    let folded: String = s
        .nfkd()
        .filter(|c| !is_combining_mark(*c))
        .collect::<String>()
        .to_lowercase();
    let mut out = String::with_capacity(folded.len());
    let mut pending_space = false;
    for c in folded.chars() {
        if c.is_whitespace() {
            pending_space = true;
            continue;
        }
        if pending_space && !out.is_empty() {
            out.push(' ');
        }
        pending_space = false;
        out.push(if is_dash(c) { '-' } else { c });
    }
    out
}
