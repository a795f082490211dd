use std::collections::BTreeSet;

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

/// Canonical spelling of a node label for anchoring: whitespace outside
/// string and char literals is dropped and numeric literals are lowercased
/// (`0X1F` and `0x1f`, `10L` and `10l` compare equal).
pub fn normalize_label(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    let mut chars = label.chars().peekable();
    let mut prev: Option<char> = None;
    while let Some(c) = chars.next() {
        match c {
            '"' | '\'' => {
                out.push(c);
                while let Some(d) = chars.next() {
                    out.push(d);
                    if d == '\\' {
                        if let Some(e) = chars.next() {
                            out.push(e);
                        }
                    } else if d == c {
                        break;
                    }
                }
            }
            c if c.is_whitespace() => continue,
            c if c.is_ascii_digit() && !prev.is_some_and(is_ident_char) => {
                out.push(c);
                while let Some(&d) = chars.peek() {
                    if is_ident_char(d) || d == '.' {
                        out.push(d.to_ascii_lowercase());
                        chars.next();
                    } else {
                        break;
                    }
                }
            }
            c => out.push(c),
        }
        prev = out.chars().last();
    }
    out
}

/// Identifier and literal tokens of a label, used to rank candidate
/// modified pairs.
pub(crate) fn label_tokens(label: &str) -> BTreeSet<String> {
    let normalized = normalize_label(label);
    let mut tokens = BTreeSet::new();
    let mut chars = normalized.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '"' || c == '\'' {
            let mut lit = String::from(c);
            while let Some(d) = chars.next() {
                lit.push(d);
                if d == '\\' {
                    if let Some(e) = chars.next() {
                        lit.push(e);
                    }
                } else if d == c {
                    break;
                }
            }
            tokens.insert(lit);
        } else if is_ident_char(c) {
            let mut word = String::from(c);
            while let Some(&d) = chars.peek() {
                if is_ident_char(d) || (d == '.' && word.starts_with(|x: char| x.is_ascii_digit()))
                {
                    word.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            tokens.insert(word);
        }
    }
    tokens
}

/// Dice coefficient of the token sets, scaled to an integer so that
/// tie-breaking stays exact.
pub(crate) fn similarity(a: &str, b: &str) -> u64 {
    let (ta, tb) = (label_tokens(a), label_tokens(b));
    let total = (ta.len() + tb.len()) as u64;
    if total == 0 {
        return 1_000_000;
    }
    2 * 1_000_000 * ta.intersection(&tb).count() as u64 / total
}
