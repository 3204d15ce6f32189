//! Tokenizer for the `.idx` concrete syntax.

use crate::syntax::Span;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    // keywords
    Def,
    Forall,
    Exists,
    Rec,
    Case,
    Inj1,
    Inj2,
    Vec,
    Zero,  // Z
    Succ,  // S
    NatSort, // N
    // punctuation
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Dot,
    Pipe,
    Underscore,
    Backslash,
    Caret,
    One,      // 1
    Star,     // *
    Plus,     // +
    Arrow,    // ->
    FatArrow, // =>
    Eq,       // =
    ColonColon, // ::
    AndProp,  // /\
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Def => "`def`".into(),
            Tok::Forall => "`forall`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::Rec => "`rec`".into(),
            Tok::Case => "`case`".into(),
            Tok::Inj1 => "`inj1`".into(),
            Tok::Inj2 => "`inj2`".into(),
            Tok::Vec => "`Vec`".into(),
            Tok::Zero => "`Z`".into(),
            Tok::Succ => "`S`".into(),
            Tok::NatSort => "`N`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Underscore => "`_`".into(),
            Tok::Backslash => "`\\`".into(),
            Tok::Caret => "`^`".into(),
            Tok::One => "`1`".into(),
            Tok::Star => "`*`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::FatArrow => "`=>`".into(),
            Tok::Eq => "`=`".into(),
            Tok::ColonColon => "`::`".into(),
            Tok::AndProp => "`/\\`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn lex(text: &str) -> Result<Vec<Token>, (String, Span)> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let lo = i as u32;
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                i += 1;
            }
            '-' if bytes.get(i + 1) == Some(&b'-') => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            '-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push(Token { tok: Tok::Arrow, span: Span::new(lo, lo + 2) });
                i += 2;
            }
            '=' if bytes.get(i + 1) == Some(&b'>') => {
                out.push(Token { tok: Tok::FatArrow, span: Span::new(lo, lo + 2) });
                i += 2;
            }
            '=' => {
                out.push(Token { tok: Tok::Eq, span: Span::new(lo, lo + 1) });
                i += 1;
            }
            ':' if bytes.get(i + 1) == Some(&b':') => {
                out.push(Token { tok: Tok::ColonColon, span: Span::new(lo, lo + 2) });
                i += 2;
            }
            ':' => {
                out.push(Token { tok: Tok::Colon, span: Span::new(lo, lo + 1) });
                i += 1;
            }
            '/' if bytes.get(i + 1) == Some(&b'\\') => {
                out.push(Token { tok: Tok::AndProp, span: Span::new(lo, lo + 2) });
                i += 2;
            }
            '(' => {
                out.push(Token { tok: Tok::LParen, span: Span::new(lo, lo + 1) });
                i += 1;
            }
            ')' => {
                out.push(Token { tok: Tok::RParen, span: Span::new(lo, lo + 1) });
                i += 1;
            }
            '[' => {
                out.push(Token { tok: Tok::LBracket, span: Span::new(lo, lo + 1) });
                i += 1;
            }
            ']' => {
                out.push(Token { tok: Tok::RBracket, span: Span::new(lo, lo + 1) });
                i += 1;
            }
            ',' => {
                out.push(Token { tok: Tok::Comma, span: Span::new(lo, lo + 1) });
                i += 1;
            }
            ';' => {
                out.push(Token { tok: Tok::Semi, span: Span::new(lo, lo + 1) });
                i += 1;
            }
            '.' => {
                out.push(Token { tok: Tok::Dot, span: Span::new(lo, lo + 1) });
                i += 1;
            }
            '|' => {
                out.push(Token { tok: Tok::Pipe, span: Span::new(lo, lo + 1) });
                i += 1;
            }
            '\\' => {
                out.push(Token { tok: Tok::Backslash, span: Span::new(lo, lo + 1) });
                i += 1;
            }
            '^' => {
                out.push(Token { tok: Tok::Caret, span: Span::new(lo, lo + 1) });
                i += 1;
            }
            '1' => {
                out.push(Token { tok: Tok::One, span: Span::new(lo, lo + 1) });
                i += 1;
            }
            '*' => {
                out.push(Token { tok: Tok::Star, span: Span::new(lo, lo + 1) });
                i += 1;
            }
            '+' => {
                out.push(Token { tok: Tok::Plus, span: Span::new(lo, lo + 1) });
                i += 1;
            }
            '_' if !ident_cont(bytes.get(i + 1)) => {
                out.push(Token { tok: Tok::Underscore, span: Span::new(lo, lo + 1) });
                i += 1;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && ident_cont(Some(&bytes[i])) {
                    i += 1;
                }
                let word = &text[start..i];
                let span = Span::new(lo, i as u32);
                let tok = match word {
                    "def" => Tok::Def,
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "rec" => Tok::Rec,
                    "case" => Tok::Case,
                    "inj1" => Tok::Inj1,
                    "inj2" => Tok::Inj2,
                    "Vec" => Tok::Vec,
                    "Z" => Tok::Zero,
                    "S" => Tok::Succ,
                    "N" => Tok::NatSort,
                    _ => Tok::Ident(word.to_string()),
                };
                out.push(Token { tok, span });
            }
            other => {
                return Err((
                    format!("unexpected character `{other}`"),
                    Span::new(lo, lo + 1),
                ));
            }
        }
    }
    out.push(Token { tok: Tok::Eof, span: Span::new(bytes.len() as u32, bytes.len() as u32) });
    Ok(out)
}

fn ident_cont(b: Option<&u8>) -> bool {
    matches!(b, Some(c) if (*c as char).is_ascii_alphanumeric() || *c == b'_' || *c == b'\'')
}
