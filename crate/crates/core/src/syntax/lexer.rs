use super::parser::ParseError;
use super::Span;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    /// Digits only; the text is kept so it can also serve as an identifier.
    Int(String),
    Str(String),
    Sym(&'static str),
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(s) => write!(f, "`{s}`"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

pub(crate) const KEYWORDS: &[&str] = &[
    "main",
    "if",
    "then",
    "else",
    "try",
    "or",
    "skip",
    "fail",
    "empty",
    "where",
    "interface",
    "rule",
    "int",
    "string",
    "atom",
    "list",
    "edge",
    "indeg",
    "outdeg",
    "not",
    "and",
];

// longest first
const SYMBOLS: &[&str] = &[
    "=>", "!=", "<=", ">=", "(", ")", "[", "]", "{", "}", ",", ";", ":", ".", "|", "=", "!", "#",
    "+", "-", "*", "/", "<", ">",
];

pub(crate) fn tokenize(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, chars: &[char]| {
        if chars[*i] == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        *i += 1;
    };
    while i < chars.len() {
        let c = chars[i];
        let span = Span::new(line, col);
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, &chars);
        } else if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, &chars);
            }
        } else if c == '/' && chars.get(i + 1) == Some(&'*') {
            advance(&mut i, &mut line, &mut col, &chars);
            advance(&mut i, &mut line, &mut col, &chars);
            loop {
                if i + 1 >= chars.len() {
                    return Err(ParseError::new(span, "unterminated comment"));
                }
                if chars[i] == '*' && chars[i + 1] == '/' {
                    advance(&mut i, &mut line, &mut col, &chars);
                    advance(&mut i, &mut line, &mut col, &chars);
                    break;
                }
                advance(&mut i, &mut line, &mut col, &chars);
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                advance(&mut i, &mut line, &mut col, &chars);
            }
            out.push((Tok::Ident(s), span));
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                advance(&mut i, &mut line, &mut col, &chars);
            }
            out.push((Tok::Int(s), span));
        } else if c == '"' {
            advance(&mut i, &mut line, &mut col, &chars);
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None | Some('\n') => return Err(ParseError::new(span, "unterminated string")),
                    Some('"') => {
                        advance(&mut i, &mut line, &mut col, &chars);
                        break;
                    }
                    Some('\\') => {
                        let esc = Span::new(line, col);
                        advance(&mut i, &mut line, &mut col, &chars);
                        match chars.get(i) {
                            Some(&e @ ('"' | '\\')) => s.push(e),
                            _ => return Err(ParseError::new(esc, "invalid escape in string")),
                        }
                        advance(&mut i, &mut line, &mut col, &chars);
                    }
                    Some(&ch) => {
                        s.push(ch);
                        advance(&mut i, &mut line, &mut col, &chars);
                    }
                }
            }
            out.push((Tok::Str(s), span));
        } else {
            let sym = SYMBOLS.iter().find(|s| {
                s.chars()
                    .enumerate()
                    .all(|(k, sc)| chars.get(i + k) == Some(&sc))
            });
            let Some(sym) = sym else {
                return Err(ParseError::new(span, format!("unexpected character `{c}`")));
            };
            for _ in 0..sym.len() {
                advance(&mut i, &mut line, &mut col, &chars);
            }
            out.push((Tok::Sym(sym), span));
        }
    }
    out.push((Tok::Eof, Span::new(line, col)));
    Ok(out)
}
