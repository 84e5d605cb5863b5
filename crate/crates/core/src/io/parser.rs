//! Reader and writer for the rule/fact text format.
//!
//! ```text
//! % a comment
//! human(alice).
//! [R1] human(X) -> parentOf(Y,X), human(Y).
//! ```
//!
//! Uppercase identifiers and `?name` are variables, lowercase or numeric
//! identifiers and `"quoted"` strings are constants, `_:name` is a null.
//! Head variables missing from the body are existential.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::logic::{name, Atom, AtomSet, NullKey, Term};
use crate::rules::{validate_kb, Diagnostic, KnowledgeBase, Rule, RuleSet};

#[derive(Clone, Debug)]
pub struct ParsedDocument {
    pub kb: KnowledgeBase,
    pub diagnostics: Vec<Diagnostic>,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Parser<'a> {
        Parser { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> Error {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map(|i| i + 1).unwrap_or(0);
        let column = self.src[line_start..pos].chars().count() + 1;
        let line_text = self.src[line_start..].lines().next().unwrap_or("");
        let excerpt = format!("{line_text}\n{}^", " ".repeat(column - 1));
        Error::Syntax {
            line,
            column,
            message: message.into(),
            excerpt,
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        self.error_at(self.pos, message)
    }

    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('%') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => return,
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            let found = match self.peek() {
                Some(c) => format!("{c:?}"),
                None => "end of input".to_string(),
            };
            Err(self.error(format!("expected {token:?}, found {found}")))
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(is_ident_char) {
            self.bump();
        }
        if start == self.pos {
            return Err(self.error("expected an identifier"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn quoted(&mut self) -> Result<String> {
        let start = self.pos;
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                Some('"') => return Ok(out),
                Some('\\') => match self.bump() {
                    Some(c) => out.push(c),
                    None => return Err(self.error_at(start, "unterminated string")),
                },
                Some(c) => out.push(c),
                None => return Err(self.error_at(start, "unterminated string")),
            }
        }
    }

    fn term(&mut self) -> Result<Term> {
        self.skip_ws();
        match self.peek() {
            Some('"') => Ok(Term::Constant(name(&self.quoted()?))),
            Some('?') => {
                self.bump();
                Ok(Term::variable(self.ident()?))
            }
            Some('_') if self.rest().starts_with("_:") => {
                self.pos += 2;
                self.null()
            }
            Some(c) if c.is_ascii_uppercase() => Ok(Term::variable(self.ident()?)),
            Some(c) if c.is_ascii_alphanumeric() => Ok(Term::constant(self.ident()?)),
            _ => Err(self.error("expected a term")),
        }
    }

    fn null(&mut self) -> Result<Term> {
        let label = self.ident()?;
        if !self.rest().starts_with('#') {
            return Ok(Term::initial_null(label));
        }
        self.pos += 1;
        let key = if self.eat("{") {
            let mut pairs = Vec::new();
            if !self.eat("}") {
                loop {
                    let var = self.ident()?;
                    self.expect(":")?;
                    pairs.push((name(var), self.term()?));
                    if self.eat("}") {
                        break;
                    }
                    self.expect(",")?;
                }
            }
            NullKey::Trigger(pairs)
        } else if self.eat("[") {
            let mut terms = Vec::new();
            if !self.eat("]") {
                loop {
                    terms.push(self.term()?);
                    if self.eat("]") {
                        break;
                    }
                    self.expect(",")?;
                }
            }
            NullKey::Frontier(terms)
        } else {
            return Err(self.error("expected '{' or '[' in a null key"));
        };
        self.expect("#")?;
        let exvar = self.ident()?;
        Ok(Term::fresh_null(name(label), key, name(exvar)))
    }

    fn atom(&mut self) -> Result<Atom> {
        let pred = self.ident()?;
        self.expect("(")?;
        let mut args = Vec::new();
        if !self.eat(")") {
            loop {
                args.push(self.term()?);
                if self.eat(")") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(Atom::new(pred, args))
    }

    fn atoms(&mut self) -> Result<Vec<(usize, Atom)>> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let start = self.pos;
            out.push((start, self.atom()?));
            if !self.eat(",") {
                return Ok(out);
            }
        }
    }
}

/// Parses a knowledge base. Syntax errors abort; arity conflicts and
/// renamings are reported as diagnostics on the parsed document.
pub fn parse_kb(text: &str) -> Result<ParsedDocument> {
    let mut p = Parser::new(text);
    let mut facts = AtomSet::new();
    let mut rules: Vec<(usize, Option<String>, AtomSet, AtomSet)> = Vec::new();
    while !p.at_end() {
        let start = p.pos;
        let id = if p.eat("[") {
            let id = p.ident()?.to_string();
            p.expect("]")?;
            Some(id)
        } else {
            None
        };
        let lhs = p.atoms()?;
        if p.eat("->") {
            let rhs = p.atoms()?;
            p.expect(".")?;
            rules.push((
                start,
                id,
                lhs.into_iter().map(|(_, a)| a).collect(),
                rhs.into_iter().map(|(_, a)| a).collect(),
            ));
        } else {
            if id.is_some() {
                return Err(p.error("expected \"->\" after a rule id"));
            }
            p.expect(".")?;
            for (pos, atom) in lhs {
                if atom.args.iter().any(Term::is_variable) {
                    return Err(p.error_at(pos, format!("fact {atom} contains a variable")));
                }
                facts.insert(atom);
            }
        }
    }
    let explicit: BTreeSet<String> = rules.iter().filter_map(|r| r.1.clone()).collect();
    let mut built = Vec::new();
    for (i, (start, id, body, head)) in rules.into_iter().enumerate() {
        let id = id.unwrap_or_else(|| {
            let mut n = i + 1;
            while explicit.contains(&format!("R{n}")) {
                n += 100;
            }
            format!("R{n}")
        });
        built.push(Rule::new(&id, body, head).map_err(|e| p.error_at(start, e.to_string()))?);
    }
    let ruleset = RuleSet::new(built).map_err(|e| p.error_at(0, e.to_string()))?;
    let kb = KnowledgeBase::new(facts, ruleset);
    let diagnostics = validate_kb(&kb);
    Ok(ParsedDocument { kb, diagnostics })
}

pub fn parse_atom(text: &str) -> Result<Atom> {
    let mut p = Parser::new(text);
    let atom = p.atom()?;
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(atom)
}

pub fn parse_term(text: &str) -> Result<Term> {
    let mut p = Parser::new(text);
    let term = p.term()?;
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(term)
}

/// A comma-separated list of atoms, as accepted by `--keep`.
pub fn parse_atom_list(text: &str) -> Result<Vec<Atom>> {
    let mut p = Parser::new(text);
    if p.at_end() {
        return Ok(Vec::new());
    }
    let atoms = p.atoms()?.into_iter().map(|(_, a)| a).collect();
    p.eat(".");
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(atoms)
}

pub fn serialize_rule(rule: &Rule) -> String {
    format!("{rule}.")
}

/// Facts first, one per line, then rules with explicit ids.
pub fn serialize_kb(kb: &KnowledgeBase) -> String {
    let mut out = String::new();
    for atom in &kb.factbase {
        out.push_str(&format!("{atom}.\n"));
    }
    for rule in kb.ruleset.rules() {
        out.push_str(&serialize_rule(rule));
        out.push('\n');
    }
    out
}
