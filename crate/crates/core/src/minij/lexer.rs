use serde::{Deserialize, Serialize};

use super::error::LexError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenKind {
    Keyword,
    Identifier,
    Literal,
    Operator,
    Punctuation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: u32,
    pub col: u32,
}

impl Token {
    pub fn is(&self, kind: TokenKind, text: &str) -> bool {
        self.kind == kind && self.text == text
    }
}

pub const KEYWORDS: &[&str] = &[
    "if", "else", "while", "for", "switch", "case", "default", "break", "continue", "return",
    "throw", "new", "this", "super", "var", "final",
];

const LITERAL_WORDS: &[&str] = &["true", "false", "null"];

// Longest match first.
const OPERATORS: &[&str] = &[
    ">>>=", ">>>", "<<=", ">>=", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=",
    "/=", "%=", "&=", "|=", "^=", "<<", ">>", "+", "-", "*", "/", "%", "<", ">", "=", "!", "~",
    "&", "|", "^", "?", ":",
];

const PUNCTUATION: &[char] = &['(', ')', '{', '}', '[', ']', ';', ',', '.'];

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, line: u32, col: u32, message: impl Into<String>) -> LexError {
        LexError {
            line,
            col,
            message: message.into(),
        }
    }
}

/// Splits MiniJ source text into tokens. Whitespace and comments are skipped
/// and never produce tokens; every token keeps its exact source spelling.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor {
        src: source,
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek() {
        let (line, col, start) = (cur.line, cur.col, cur.pos);

        if c.is_whitespace() {
            cur.bump();
            continue;
        }

        if c == '/' && cur.peek_at(1) == Some('/') {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }

        if c == '/' && cur.peek_at(1) == Some('*') {
            cur.bump();
            cur.bump();
            loop {
                match cur.peek() {
                    None => return Err(cur.error(line, col, "unterminated block comment")),
                    Some('*') if cur.peek_at(1) == Some('/') => {
                        cur.bump();
                        cur.bump();
                        break;
                    }
                    Some(_) => {
                        cur.bump();
                    }
                }
            }
            continue;
        }

        let kind = if c.is_ascii_alphabetic() || c == '_' || c == '$' {
            while matches!(cur.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_' || c == '$')
            {
                cur.bump();
            }
            let word = &source[start..cur.pos];
            if KEYWORDS.contains(&word) {
                TokenKind::Keyword
            } else if LITERAL_WORDS.contains(&word) {
                TokenKind::Literal
            } else {
                TokenKind::Identifier
            }
        } else if c.is_ascii_digit()
            || (c == '.' && matches!(cur.peek_at(1), Some(d) if d.is_ascii_digit()))
        {
            lex_number(&mut cur);
            TokenKind::Literal
        } else if c == '"' || c == '\'' {
            lex_quoted(&mut cur, c, line, col)?;
            TokenKind::Literal
        } else if PUNCTUATION.contains(&c) {
            cur.bump();
            TokenKind::Punctuation
        } else if let Some(op) = OPERATORS.iter().find(|op| cur.rest().starts_with(**op)) {
            for _ in 0..op.len() {
                cur.bump();
            }
            TokenKind::Operator
        } else {
            return Err(cur.error(line, col, format!("illegal character {c:?}")));
        };

        tokens.push(Token {
            kind,
            text: source[start..cur.pos].to_string(),
            line,
            col,
        });
    }

    Ok(tokens)
}

fn lex_number(cur: &mut Cursor<'_>) {
    if cur.peek() == Some('0') && matches!(cur.peek_at(1), Some('x' | 'X')) {
        cur.bump();
        cur.bump();
        while matches!(cur.peek(), Some(c) if c.is_ascii_hexdigit() || c == '_') {
            cur.bump();
        }
    } else {
        while matches!(cur.peek(), Some(c) if c.is_ascii_digit() || c == '_') {
            cur.bump();
        }
        if cur.peek() == Some('.') && matches!(cur.peek_at(1), Some(c) if c.is_ascii_digit()) {
            cur.bump();
            while matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
                cur.bump();
            }
        }
        if matches!(cur.peek(), Some('e' | 'E')) {
            let sign = matches!(cur.peek_at(1), Some('+' | '-'));
            let digit_at = if sign { 2 } else { 1 };
            if matches!(cur.peek_at(digit_at), Some(c) if c.is_ascii_digit()) {
                for _ in 0..=digit_at {
                    cur.bump();
                }
                while matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
                    cur.bump();
                }
            }
        }
    }
    if matches!(cur.peek(), Some('l' | 'L' | 'f' | 'F' | 'd' | 'D')) {
        cur.bump();
    }
}

fn lex_quoted(cur: &mut Cursor<'_>, quote: char, line: u32, col: u32) -> Result<(), LexError> {
    cur.bump();
    loop {
        match cur.peek() {
            None | Some('\n') => {
                let what = if quote == '"' { "string" } else { "character" };
                return Err(cur.error(line, col, format!("unterminated {what} literal")));
            }
            Some('\\') => {
                cur.bump();
                cur.bump();
            }
            Some(c) if c == quote => {
                cur.bump();
                return Ok(());
            }
            Some(_) => {
                cur.bump();
            }
        }
    }
}
