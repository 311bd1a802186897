//! Line-oriented text documents.
//!
//! Every document starts with a header `<kind> v1` followed by `key:` lines.
//! Blank lines and lines starting with `#` are ignored. Names containing
//! whitespace, brackets or quotes are written in double quotes.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::lexer::{quote, Line, Reader};
use super::FORMAT_VERSION;
use crate::automata::{Alphabet, IndexKind, LetterTransducer, ParityIndex, Priority, Symbol, Transducer, UpWord, WordAutomaton};
use crate::error::{Error, Result};
use crate::games::{ParityGame, Player};
use crate::wilke::{Homomorphism, WilkeAlgebra};

fn at_line(line: &Line, tok: usize) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Parse { .. } => e,
        other => line.error(tok, other.to_string()),
    }
}

/// Distinct names from token `from` on.
fn name_list(line: &Line, from: usize, what: &str) -> Result<(Vec<String>, HashMap<String, usize>)> {
    let mut names = Vec::new();
    let mut lookup = HashMap::new();
    for (i, w) in line.words(from) {
        if lookup.insert(w.to_string(), names.len()).is_some() {
            return Err(line.error(i, format!("duplicate {what} `{w}`")));
        }
        names.push(w.to_string());
    }
    Ok((names, lookup))
}

fn lookup(map: &HashMap<String, usize>, line: &Line, tok: usize, what: &str) -> Result<usize> {
    let w = line.tokens.get(tok).map(|t| t.text.as_str()).ok_or_else(|| line.error(tok, format!("expected a {what}")))?;
    map.get(w).copied().ok_or_else(|| line.error(tok, format!("unknown {what} `{w}`")))
}

fn arity(line: &Line, n: usize, shape: &str) -> Result<()> {
    if line.tokens.len() != n {
        let tok = line.tokens.len().min(n);
        return Err(line.error(tok, format!("expected `{shape}`")));
    }
    Ok(())
}

/// Splits `--label-->` into its label.
fn arrow_label<'a>(line: &'a Line, tok: usize, shape: &str) -> Result<&'a str> {
    let t = &line.tokens[tok];
    t.text
        .strip_prefix("--")
        .and_then(|s| s.strip_suffix("-->"))
        .filter(|s| !s.is_empty() && !t.quoted)
        .ok_or_else(|| line.error(tok, format!("expected `{shape}`")))
}

fn letter(al: &Alphabet, name: &str, line: &Line, tok: usize) -> Result<Symbol> {
    al.symbol(name).ok_or_else(|| line.error(tok, format!("unknown letter `{name}`")))
}

fn join_quoted<'a>(names: impl IntoIterator<Item = &'a str>) -> String {
    names.into_iter().map(|n| quote(n).into_owned()).collect::<Vec<_>>().join(" ")
}

fn push_line(out: &mut String, key: &str, rest: &str) {
    out.push_str(key);
    if !rest.is_empty() {
        out.push(' ');
        out.push_str(rest);
    }
    out.push('\n');
}

// ---- alphabets

/// `a b c` for a plain alphabet, `[a b] x [0 1]` for a product.
pub fn print_alphabet(al: &Alphabet) -> String {
    if !al.is_product() {
        return join_quoted(al.names().iter().map(String::as_str));
    }
    al.factors()
        .iter()
        .map(|f| format!("[{}]", print_alphabet(f)))
        .collect::<Vec<_>>()
        .join(" x ")
}

fn parse_alphabet_tokens(line: &Line, from: usize) -> Result<Alphabet> {
    let n = line.tokens.len();
    if from >= n {
        return Err(line.error(from, "expected letters"));
    }
    let is = |i: usize, s: &str| line.tokens.get(i).is_some_and(|t| !t.quoted && t.text == s);
    if !is(from, "[") {
        let names: Vec<&str> = line.words(from).map(|(_, w)| w).collect();
        return Alphabet::new(names).map_err(at_line(line, from));
    }
    let mut i = from;
    let al = product_list(line, &mut i, &is)?;
    if i != n {
        return Err(line.error(i, "expected `x [` or end of line"));
    }
    Ok(al)
}

fn product_list(line: &Line, i: &mut usize, is: &dyn Fn(usize, &str) -> bool) -> Result<Alphabet> {
    let mut factors = vec![factor(line, i, is)?];
    while is(*i, "x") && is(*i + 1, "[") {
        *i += 1;
        factors.push(factor(line, i, is)?);
    }
    Ok(Alphabet::product(&factors))
}

fn factor(line: &Line, i: &mut usize, is: &dyn Fn(usize, &str) -> bool) -> Result<Alphabet> {
    if !is(*i, "[") {
        return Err(line.error(*i, "expected `[`"));
    }
    *i += 1;
    let al = if is(*i, "[") {
        product_list(line, i, is)?
    } else {
        let start = *i;
        let mut names = Vec::new();
        while *i < line.tokens.len() && !is(*i, "]") {
            if is(*i, "[") {
                return Err(line.error(*i, "unexpected `[`"));
            }
            names.push(line.tokens[*i].text.as_str());
            *i += 1;
        }
        Alphabet::new(names).map_err(at_line(line, start))?
    };
    if !is(*i, "]") {
        return Err(line.error(*i, "expected `]`"));
    }
    *i += 1;
    Ok(al)
}

/// Parses an alphabet expression as written after `alphabet:`.
pub fn parse_alphabet(text: &str) -> Result<Alphabet> {
    let lines = super::lexer::lines(text)?;
    match lines.as_slice() {
        [l] => parse_alphabet_tokens(l, 0),
        [] => Err(Error::parse(1, 1, "expected letters")),
        [_, l, ..] => Err(l.error(0, "expected a single line")),
    }
}

// ---- ultimately periodic words

enum Item<'a> {
    Letter(&'a str, usize),
    Group(&'a str, usize),
}

/// Splits a word literal into letters and parenthesized groups.
fn items(s: &str, line: usize, col: usize) -> Result<Vec<Item<'_>>> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (b, c) = chars[k];
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if c == ')' {
            return Err(Error::parse(line, col + k, "unbalanced `)`"));
        }
        if c == '(' {
            let mut depth = 0usize;
            let mut end = None;
            for (j, &(_, d)) in chars.iter().enumerate().skip(k) {
                match d {
                    '(' => depth += 1,
                    ')' => {
                        depth -= 1;
                        if depth == 0 {
                            end = Some(j);
                            break;
                        }
                    }
                    _ => {}
                }
            }
            let j = end.ok_or_else(|| Error::parse(line, col + k, "unbalanced `(`"))?;
            let inner = &s[b + 1..chars[j].0];
            let mut d = 0usize;
            let (mut space, mut comma) = (false, false);
            for ch in inner.chars() {
                match ch {
                    '(' => d += 1,
                    ')' => d -= 1,
                    ',' if d == 0 => comma = true,
                    ch if ch.is_whitespace() && d == 0 => space = true,
                    _ => {}
                }
            }
            if !space && comma {
                out.push(Item::Letter(&s[b..=chars[j].0], col + k));
            } else {
                out.push(Item::Group(inner, col + k + 1));
            }
            k = j + 1;
            continue;
        }
        let mut j = k;
        while j < chars.len() && !chars[j].1.is_whitespace() && chars[j].1 != '(' && chars[j].1 != ')' {
            j += 1;
        }
        let e = chars.get(j).map_or(s.len(), |&(e, _)| e);
        out.push(Item::Letter(&s[b..e], col + k));
        k = j;
    }
    Ok(out)
}

fn parse_upword_at(s: &str, al: &Alphabet, line: usize, col: usize) -> Result<UpWord<Symbol>> {
    let sym = |name: &str, c: usize| al.symbol(name).ok_or_else(|| Error::parse(line, c, format!("unknown letter `{name}`")));
    let all = items(s, line, col)?;
    let mut prefix = Vec::new();
    for (n, it) in all.iter().enumerate() {
        match *it {
            Item::Letter(name, c) => prefix.push(sym(name, c)?),
            Item::Group(inner, c) => {
                if n + 1 != all.len() {
                    return Err(Error::parse(line, c - 1, "the parenthesized period must come last"));
                }
                let mut period = Vec::new();
                for it in items(inner, line, c)? {
                    match it {
                        Item::Letter(name, c) => period.push(sym(name, c)?),
                        Item::Group(_, c) => return Err(Error::parse(line, c - 1, "nested period")),
                    }
                }
                if period.is_empty() {
                    return Err(Error::parse(line, c - 1, "empty period"));
                }
                return UpWord::new(prefix, period);
            }
        }
    }
    let c = col + s.chars().count();
    Err(Error::parse(line, c, "expected a parenthesized period"))
}

/// Parses a literal such as `a b (b a)`: prefix letters, then the period in
/// parentheses. Product letters are written as tuples, e.g. `(a,0) ((b,1))`.
pub fn parse_upword(text: &str, al: &Alphabet) -> Result<UpWord<Symbol>> {
    parse_upword_at(text, al, 1, 1)
}

pub fn print_upword(w: &UpWord<Symbol>, al: &Alphabet) -> String {
    let names = |v: &[Symbol]| v.iter().map(|&a| al.name(a)).collect::<Vec<_>>().join(" ");
    if w.prefix().is_empty() {
        format!("({})", names(w.period()))
    } else {
        format!("{} ({})", names(w.prefix()), names(w.period()))
    }
}

fn upword_line(line: &Line, tok: usize, al: &Alphabet) -> Result<UpWord<Symbol>> {
    let (s, col) = line.rest(tok);
    parse_upword_at(s, al, line.no, col)
}

// ---- indices

/// `P,lo,hi` for a strong index, `W,lo,hi` for a weak one.
pub fn parse_index_literal(s: &str) -> Result<ParityIndex> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Error::invalid(format!("bad index `{s}`, expected P,lo,hi or W,lo,hi"));
    let [kind, lo, hi] = parts.as_slice() else {
        return Err(bad());
    };
    let kind = match *kind {
        "P" | "p" => IndexKind::Strong,
        "W" | "w" => IndexKind::Weak,
        _ => return Err(bad()),
    };
    let lo: Priority = lo.parse().map_err(|_| bad())?;
    let hi: Priority = hi.parse().map_err(|_| bad())?;
    ParityIndex::new(kind, lo, hi)
}

pub fn print_index_literal(c: &ParityIndex) -> String {
    let k = match c.kind {
        IndexKind::Strong => "P",
        IndexKind::Weak => "W",
    };
    format!("{k},{},{}", c.lo, c.hi)
}

fn parse_index_line(line: &Line) -> Result<ParityIndex> {
    arity(line, 4, "index: strong|weak LO HI")?;
    let kind = match line.tokens[1].text.as_str() {
        "strong" => IndexKind::Strong,
        "weak" => IndexKind::Weak,
        other => return Err(line.error(1, format!("expected `strong` or `weak`, found `{other}`"))),
    };
    let num = |i: usize| {
        line.tokens[i]
            .text
            .parse::<Priority>()
            .map_err(|_| line.error(i, format!("expected a priority, found `{}`", line.tokens[i].text)))
    };
    ParityIndex::new(kind, num(2)?, num(3)?).map_err(at_line(line, 2))
}

// ---- automata

fn read_automaton(r: &mut Reader) -> Result<WordAutomaton> {
    let l = r.expect("alphabet:")?;
    let al = parse_alphabet_tokens(l, 1)?;
    let l = r.expect("states:")?;
    let (names, ids) = name_list(l, 1, "state")?;
    if names.is_empty() {
        return Err(l.error(1, "expected at least one state"));
    }
    let l = r.expect("initial:")?;
    let mut init = Vec::new();
    for i in 1..l.tokens.len() {
        init.push(lookup(&ids, l, i, "state")?);
    }
    if init.is_empty() {
        return Err(l.error(1, "expected at least one initial state"));
    }
    let index = parse_index_line(r.expect("index:")?)?;
    let mut d = WordAutomaton::new(al.clone(), index, names.len()).with_names(names)?;
    d.set_initial(init);
    while r.peek_key() == Some("trans:") {
        let l = r.next_line().unwrap();
        let shape = "trans: q --a/k--> q'";
        arity(l, 4, shape)?;
        let from = lookup(&ids, l, 1, "state")?;
        let to = lookup(&ids, l, 3, "state")?;
        let label = arrow_label(l, 2, shape)?;
        let (name, k) = label.rsplit_once('/').ok_or_else(|| l.error(2, format!("expected `{shape}`")))?;
        let a = letter(&al, name, l, 2)?;
        let k: Priority = k.parse().map_err(|_| l.error(2, format!("bad priority `{k}`")))?;
        if !index.contains(k) {
            return Err(l.error(
                2,
                format!("priority {k} outside {index} in transition `{} {} {}`", l.tokens[1].text, l.tokens[2].text, l.tokens[3].text),
            ));
        }
        d.add_transition(from, a, k, to).map_err(at_line(l, 2))?;
    }
    Ok(d)
}

pub fn parse_automaton(text: &str) -> Result<WordAutomaton> {
    let mut r = Reader::new(text)?;
    r.header("automaton")?;
    let d = read_automaton(&mut r)?;
    r.finish()?;
    Ok(d)
}

pub fn print_automaton(d: &WordAutomaton) -> String {
    let mut out = format!("automaton {FORMAT_VERSION}\n");
    push_line(&mut out, "alphabet:", &print_alphabet(d.alphabet()));
    push_line(&mut out, "states:", &join_quoted(d.state_names().iter().map(String::as_str)));
    push_line(&mut out, "initial:", &join_quoted(d.initial().iter().map(|&q| d.state_name(q))));
    push_line(&mut out, "index:", &d.index().to_string());
    for (q, a, k, to) in d.transitions() {
        let _ = writeln!(
            out,
            "trans: {} --{}/{k}--> {}",
            quote(d.state_name(q)),
            d.alphabet().name(a),
            quote(d.state_name(to))
        );
    }
    out
}

// ---- transducers

fn read_transducer(r: &mut Reader) -> Result<LetterTransducer> {
    let input = parse_alphabet_tokens(r.expect("input:")?, 1)?;
    let output = parse_alphabet_tokens(r.expect("output:")?, 1)?;
    let states_line = r.expect("states:")?.clone();
    let (names, ids) = name_list(&states_line, 1, "state")?;
    if names.is_empty() {
        return Err(states_line.error(1, "expected at least one state"));
    }
    let l = r.expect("initial:")?;
    arity(l, 2, "initial: s")?;
    let initial = lookup(&ids, l, 1, "state")?;
    let n = input.len();
    let mut table: Vec<Option<(Symbol, usize)>> = vec![None; names.len() * n];
    while r.peek_key() == Some("trans:") {
        let l = r.next_line().unwrap();
        let shape = "trans: s --a/b--> s'";
        arity(l, 4, shape)?;
        let from = lookup(&ids, l, 1, "state")?;
        let to = lookup(&ids, l, 3, "state")?;
        let label = arrow_label(l, 2, shape)?;
        let split = label
            .match_indices('/')
            .filter_map(|(i, _)| Some((input.symbol(&label[..i])?, output.symbol(&label[i + 1..])?)))
            .collect::<Vec<_>>();
        let (a, b) = match split.as_slice() {
            [one] => *one,
            [] => return Err(l.error(2, format!("`{label}` is not an input letter and an output letter"))),
            _ => return Err(l.error(2, format!("ambiguous label `{label}`"))),
        };
        let slot = &mut table[from * n + a];
        if slot.is_some() {
            return Err(l.error(2, format!("second transition from `{}` on `{}`", names[from], input.name(a))));
        }
        *slot = Some((b, to));
    }
    let mut delta = Vec::with_capacity(table.len());
    for (i, e) in table.into_iter().enumerate() {
        let e = e.ok_or_else(|| {
            states_line.error(1, format!("no transition from `{}` on `{}`", names[i / n], input.name(i % n)))
        })?;
        delta.push(e);
    }
    let machine = Transducer::from_table((0..n).collect(), initial, delta)?;
    Ok(LetterTransducer { input, output, machine, state_names: names })
}

pub fn parse_transducer(text: &str) -> Result<LetterTransducer> {
    let mut r = Reader::new(text)?;
    r.header("transducer")?;
    let t = read_transducer(&mut r)?;
    r.finish()?;
    Ok(t)
}

pub fn print_transducer(t: &LetterTransducer) -> String {
    let mut out = format!("transducer {FORMAT_VERSION}\n");
    push_line(&mut out, "input:", &print_alphabet(&t.input));
    push_line(&mut out, "output:", &print_alphabet(&t.output));
    push_line(&mut out, "states:", &join_quoted(t.state_names.iter().map(String::as_str)));
    push_line(&mut out, "initial:", &quote(&t.state_names[t.machine.initial()]));
    for (s, i, &b, to) in t.machine.transitions() {
        let a = t.machine.inputs()[i];
        let _ = writeln!(
            out,
            "trans: {} --{}/{}--> {}",
            quote(&t.state_names[s]),
            t.input.name(a),
            t.output.name(b),
            quote(&t.state_names[to])
        );
    }
    out
}

// ---- games

fn read_game(r: &mut Reader) -> Result<ParityGame> {
    let mut g = ParityGame::new();
    let mut ids = HashMap::new();
    while r.peek_key() == Some("position:") {
        let l = r.next_line().unwrap();
        arity(l, 3, "position: v I|II")?;
        let owner = match l.tokens[2].text.as_str() {
            "I" => Player::I,
            "II" => Player::II,
            other => return Err(l.error(2, format!("expected `I` or `II`, found `{other}`"))),
        };
        let name = l.tokens[1].text.clone();
        if ids.contains_key(&name) {
            return Err(l.error(1, format!("duplicate position `{name}`")));
        }
        ids.insert(name.clone(), g.add_position(name, owner));
    }
    let l = r.expect("initial:")?;
    if ids.is_empty() {
        return Err(l.error(0, "expected `position:`"));
    }
    arity(l, 2, "initial: v")?;
    g.set_initial(lookup(&ids, l, 1, "position")?);
    while r.peek_key() == Some("edge:") {
        let l = r.next_line().unwrap();
        let shape = "edge: v --k--> v'";
        arity(l, 4, shape)?;
        let from = lookup(&ids, l, 1, "position")?;
        let to = lookup(&ids, l, 3, "position")?;
        let k = arrow_label(l, 2, shape)?;
        let k: Priority = k.parse().map_err(|_| l.error(2, format!("bad priority `{k}`")))?;
        g.add_edge(from, k, to).map_err(at_line(l, 2))?;
    }
    Ok(g)
}

pub fn parse_game(text: &str) -> Result<ParityGame> {
    let mut r = Reader::new(text)?;
    r.header("game")?;
    let g = read_game(&mut r)?;
    r.finish()?;
    Ok(g)
}

pub fn print_game(g: &ParityGame) -> String {
    let mut out = format!("game {FORMAT_VERSION}\n");
    for v in 0..g.num_positions() {
        let _ = writeln!(out, "position: {} {}", quote(g.name(v)), g.owner(v));
    }
    push_line(&mut out, "initial:", &quote(g.name(g.initial())));
    for e in g.edges() {
        let _ = writeln!(out, "edge: {} --{}--> {}", quote(g.name(e.from)), e.priority, quote(g.name(e.to)));
    }
    out
}

// ---- algebras

/// Reads `key: name -> v1 v2 ...` rows, one per element of `rows`.
fn read_rows(
    r: &mut Reader,
    key: &str,
    rows: &HashMap<String, usize>,
    values: &HashMap<String, usize>,
    width: usize,
    what: &str,
) -> Result<Vec<Vec<usize>>> {
    let mut out: Vec<Option<Vec<usize>>> = vec![None; rows.len()];
    while r.peek_key() == Some(key) {
        let l = r.next_line().unwrap();
        if l.tokens.len() < 3 || l.tokens[2].text != "->" {
            return Err(l.error(2.min(l.tokens.len()), format!("expected `{key} s -> ...`")));
        }
        let row = lookup(rows, l, 1, "element")?;
        if out[row].is_some() {
            return Err(l.error(1, format!("second `{key}` row for `{}`", l.tokens[1].text)));
        }
        if l.tokens.len() - 3 != width {
            return Err(l.error(l.tokens.len().min(3 + width), format!("expected {width} entries")));
        }
        out[row] = Some((3..l.tokens.len()).map(|i| lookup(values, l, i, what)).collect::<Result<_>>()?);
    }
    Ok(out.into_iter().flatten().collect())
}

fn read_algebra(r: &mut Reader) -> Result<WilkeAlgebra> {
    let (fin, fin_ids) = name_list(r.expect("finite:")?, 1, "element")?;
    let l = r.expect("infinite:")?;
    let (inf, inf_ids) = name_list(l, 1, "element")?;
    let mul = read_rows(r, "mul:", &fin_ids, &fin_ids, fin.len(), "element")?;
    let mixed = read_rows(r, "mixed:", &fin_ids, &inf_ids, inf.len(), "element")?;
    let l = r.expect("omega:")?;
    if l.tokens.len() != fin.len() + 1 {
        return Err(l.error(l.tokens.len().min(fin.len() + 1), format!("expected {} entries", fin.len())));
    }
    let omega = (1..l.tokens.len()).map(|i| lookup(&inf_ids, l, i, "element")).collect::<Result<Vec<_>>>()?;
    if mul.len() != fin.len() || mixed.len() != fin.len() {
        return Err(l.error(0, "every finite element needs a `mul:` and a `mixed:` row"));
    }
    WilkeAlgebra::new(fin, inf, mul.concat(), mixed.concat(), omega).map_err(at_line(l, 0))
}

fn write_algebra(out: &mut String, s: &WilkeAlgebra) {
    let fin = |x: usize| quote(s.fin_name(x)).into_owned();
    let inf = |x: usize| quote(s.inf_name(x)).into_owned();
    push_line(out, "finite:", &join_quoted(s.fin_names().iter().map(String::as_str)));
    push_line(out, "infinite:", &join_quoted(s.inf_names().iter().map(String::as_str)));
    for a in 0..s.fin_len() {
        let row: Vec<String> = (0..s.fin_len()).map(|b| fin(s.mul(a, b))).collect();
        let _ = writeln!(out, "mul: {} -> {}", fin(a), row.join(" "));
    }
    for a in 0..s.fin_len() {
        let row: Vec<String> = (0..s.inf_len()).map(|t| inf(s.mixed(a, t))).collect();
        let _ = writeln!(out, "mixed: {} -> {}", fin(a), row.join(" "));
    }
    let row: Vec<String> = (0..s.fin_len()).map(|a| inf(s.omega(a))).collect();
    push_line(out, "omega:", &row.join(" "));
}

pub fn parse_algebra(text: &str) -> Result<WilkeAlgebra> {
    let mut r = Reader::new(text)?;
    r.header("algebra")?;
    let s = read_algebra(&mut r)?;
    r.finish()?;
    Ok(s)
}

pub fn print_algebra(s: &WilkeAlgebra) -> String {
    let mut out = format!("algebra {FORMAT_VERSION}\n");
    write_algebra(&mut out, s);
    out
}

// ---- homomorphisms

fn read_homomorphism(r: &mut Reader) -> Result<Homomorphism> {
    let algebra = read_algebra(r)?;
    let ids = |names: &[String]| names.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect::<HashMap<_, _>>();
    let (fin_ids, inf_ids) = (ids(algebra.fin_names()), ids(algebra.inf_names()));
    let l = r.expect("alphabet:")?;
    let alphabet = parse_alphabet_tokens(l, 1)?;
    let alphabet_line = l.no;
    let mut letters: Vec<Option<usize>> = vec![None; alphabet.len()];
    while r.peek_key() == Some("letter:") {
        let l = r.next_line().unwrap();
        arity(l, 4, "letter: a -> s")?;
        let a = letter(&alphabet, &l.tokens[1].text, l, 1)?;
        if l.tokens[2].text != "->" {
            return Err(l.error(2, "expected `->`"));
        }
        if letters[a].is_some() {
            return Err(l.error(1, format!("second image for `{}`", l.tokens[1].text)));
        }
        letters[a] = Some(lookup(&fin_ids, l, 3, "element")?);
    }
    let letters: Vec<usize> = match letters.iter().position(Option::is_none) {
        Some(a) => return Err(Error::parse(alphabet_line, 1, format!("no `letter:` line for `{}`", alphabet.name(a)))),
        None => letters.into_iter().flatten().collect(),
    };
    let (mut accepting, mut sources) = (Vec::new(), Vec::new());
    while r.peek_key() == Some("accept:") {
        let l = r.next_line().unwrap();
        if l.tokens.len() < 3 || l.tokens[2].text != "->" {
            return Err(l.error(2.min(l.tokens.len()), "expected `accept: name -> ...`"));
        }
        let mut f = vec![false; algebra.inf_len()];
        for i in 3..l.tokens.len() {
            f[lookup(&inf_ids, l, i, "element")?] = true;
        }
        sources.push(l.tokens[1].text.clone());
        accepting.push(f);
    }
    let mut fin_witness: Vec<Option<Vec<Symbol>>> = vec![None; algebra.fin_len()];
    let mut seen_fin = false;
    while r.peek_key() == Some("fin-witness:") {
        let l = r.next_line().unwrap();
        if l.tokens.len() < 4 || l.tokens[2].text != "->" {
            return Err(l.error(2.min(l.tokens.len()), "expected `fin-witness: s -> a ...`"));
        }
        let s = lookup(&fin_ids, l, 1, "element")?;
        let word = (3..l.tokens.len()).map(|i| letter(&alphabet, &l.tokens[i].text, l, i)).collect::<Result<_>>()?;
        fin_witness[s] = Some(word);
        seen_fin = true;
    }
    let mut inf_witness: Vec<Option<UpWord<Symbol>>> = vec![None; algebra.inf_len()];
    let mut seen_inf = false;
    while r.peek_key() == Some("inf-witness:") {
        let l = r.next_line().unwrap();
        if l.tokens.len() < 4 || l.tokens[2].text != "->" {
            return Err(l.error(2.min(l.tokens.len()), "expected `inf-witness: t -> word`"));
        }
        let t = lookup(&inf_ids, l, 1, "element")?;
        inf_witness[t] = Some(upword_line(l, 3, &alphabet)?);
        seen_inf = true;
    }
    let complete = |seen: bool, n: usize, have: usize, what: &str| {
        if seen && have != n {
            Err(Error::invalid(format!("{what} witnesses must cover every element or none")))
        } else {
            Ok(())
        }
    };
    let fin_witness: Vec<Vec<Symbol>> = fin_witness.into_iter().flatten().collect();
    let inf_witness: Vec<UpWord<Symbol>> = inf_witness.into_iter().flatten().collect();
    complete(seen_fin, algebra.fin_len(), fin_witness.len(), "finite")?;
    complete(seen_inf, algebra.inf_len(), inf_witness.len(), "infinite")?;
    Ok(Homomorphism { algebra, alphabet, letters, accepting, sources, fin_witness, inf_witness })
}

pub fn parse_homomorphism(text: &str) -> Result<Homomorphism> {
    let mut r = Reader::new(text)?;
    r.header("homomorphism")?;
    let h = read_homomorphism(&mut r)?;
    r.finish()?;
    Ok(h)
}

/// Dumps the algebra, the letter images, the recognition sets and the
/// witnesses of every element.
pub fn print_homomorphism(h: &Homomorphism) -> String {
    let s = &h.algebra;
    let mut out = format!("homomorphism {FORMAT_VERSION}\n");
    write_algebra(&mut out, s);
    push_line(&mut out, "alphabet:", &print_alphabet(&h.alphabet));
    for (a, &x) in h.letters.iter().enumerate() {
        let _ = writeln!(out, "letter: {} -> {}", h.alphabet.name(a), quote(s.fin_name(x)));
    }
    for (src, f) in h.sources.iter().zip(&h.accepting) {
        let members: Vec<&str> = (0..s.inf_len()).filter(|&t| f[t]).map(|t| s.inf_name(t)).collect();
        push_line(&mut out, "accept:", format!("{} -> {}", quote(src), join_quoted(members)).trim_end());
    }
    for (x, w) in h.fin_witness.iter().enumerate() {
        let word: Vec<&str> = w.iter().map(|&a| h.alphabet.name(a)).collect();
        let _ = writeln!(out, "fin-witness: {} -> {}", quote(s.fin_name(x)), word.join(" "));
    }
    for (t, w) in h.inf_witness.iter().enumerate() {
        let _ = writeln!(out, "inf-witness: {} -> {}", quote(s.inf_name(t)), print_upword(w, &h.alphabet));
    }
    out
}

// ---- verdicts

/// A single-line machine-readable record `value key=value ...`. Values
/// containing whitespace are quoted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub value: String,
    pub fields: Vec<(String, String)>,
}

impl Verdict {
    pub fn new(value: impl Into<String>) -> Self {
        Verdict { value: value.into(), fields: Vec::new() }
    }

    pub fn of_bool(b: bool) -> Self {
        Verdict::new(b.to_string())
    }

    pub fn field(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn to_line(&self) -> String {
        let mut s = quote(&self.value).into_owned();
        for (k, v) in &self.fields {
            let _ = write!(s, " {k}={}", quote(v));
        }
        s
    }

    fn from_line(line: &Line, from: usize) -> Result<Self> {
        let value = line.tokens.get(from).ok_or_else(|| line.error(from, "expected a value"))?.text.clone();
        let mut fields = Vec::new();
        for i in from + 1..line.tokens.len() {
            let t = &line.tokens[i];
            let (k, v) = t.text.split_once('=').ok_or_else(|| line.error(i, "expected `key=value`"))?;
            fields.push((k.to_string(), v.to_string()));
        }
        Ok(Verdict { value, fields })
    }

    pub fn parse_line(text: &str) -> Result<Self> {
        let lines = super::lexer::lines(text)?;
        match lines.as_slice() {
            [l] => Verdict::from_line(l, 0),
            _ => Err(Error::parse(1, 1, "expected a single record line")),
        }
    }
}

// ---- documents

/// Any of the document kinds, tagged by its header.
#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    Automaton(WordAutomaton),
    Transducer(LetterTransducer),
    Game(ParityGame),
    Algebra(WilkeAlgebra),
    Homomorphism(Homomorphism),
    UpWord(Alphabet, UpWord<Symbol>),
    Verdict(Verdict),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Automaton(_) => "automaton",
            Document::Transducer(_) => "transducer",
            Document::Game(_) => "game",
            Document::Algebra(_) => "algebra",
            Document::Homomorphism(_) => "homomorphism",
            Document::UpWord(..) => "upword",
            Document::Verdict(_) => "verdict",
        }
    }
}

pub fn parse_document(text: &str) -> Result<Document> {
    let mut r = Reader::new(text)?;
    let kind = match r.first_key() {
        Some(l) => l.key().to_string(),
        None => return Err(Error::parse(1, 1, "empty document")),
    };
    r.header(&kind)?;
    let doc = match kind.as_str() {
        "automaton" => Document::Automaton(read_automaton(&mut r)?),
        "transducer" => Document::Transducer(read_transducer(&mut r)?),
        "game" => Document::Game(read_game(&mut r)?),
        "algebra" => Document::Algebra(read_algebra(&mut r)?),
        "homomorphism" => Document::Homomorphism(read_homomorphism(&mut r)?),
        "upword" => {
            let al = parse_alphabet_tokens(r.expect("alphabet:")?, 1)?;
            let w = upword_line(r.expect("word:")?, 1, &al)?;
            Document::UpWord(al, w)
        }
        "verdict" => Document::Verdict(Verdict::from_line(r.expect("result:")?, 1)?),
        other => {
            return Err(Error::parse(
                r.first_key().map_or(1, |l| l.no),
                1,
                format!("unknown document kind `{other}`, expected automaton, transducer, game, algebra, homomorphism, upword or verdict"),
            ))
        }
    };
    r.finish()?;
    Ok(doc)
}

pub fn print_document(doc: &Document) -> String {
    match doc {
        Document::Automaton(d) => print_automaton(d),
        Document::Transducer(t) => print_transducer(t),
        Document::Game(g) => print_game(g),
        Document::Algebra(s) => print_algebra(s),
        Document::Homomorphism(h) => print_homomorphism(h),
        Document::UpWord(al, w) => {
            format!("upword {FORMAT_VERSION}\nalphabet: {}\nword: {}\n", print_alphabet(al), print_upword(w, al))
        }
        Document::Verdict(v) => format!("verdict {FORMAT_VERSION}\nresult: {}\n", v.to_line()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wilke::algebra_from_dpas;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_automaton(seed: u64) -> WordAutomaton {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let al = match rng.gen_range(0..3) {
            0 => Alphabet::new(["a", "b", "c"]).unwrap(),
            1 => Alphabet::product(&[Alphabet::new(["a", "b"]).unwrap(), Alphabet::numeric(2)]),
            _ => Alphabet::product(&[
                Alphabet::product(&[Alphabet::numeric(2), Alphabet::unit()]),
                Alphabet::new(["x", "y"]).unwrap(),
            ]),
        };
        let lo = rng.gen_range(0..3);
        let index = if rng.gen_bool(0.5) { ParityIndex::strong(lo, lo + 2) } else { ParityIndex::weak(lo, lo + 1) };
        let n = rng.gen_range(1..5);
        let names = (0..n).map(|i| if i == 1 { "two words".to_string() } else { format!("p{i}") }).collect();
        let mut d = WordAutomaton::new(al.clone(), index, n).with_names(names).unwrap();
        d.set_initial((0..n).filter(|_| rng.gen_bool(0.4)).chain([0]).collect());
        for _ in 0..rng.gen_range(0..3 * n * al.len()) {
            let k = rng.gen_range(index.lo..=index.hi);
            d.add_transition(rng.gen_range(0..n), rng.gen_range(0..al.len()), k, rng.gen_range(0..n)).unwrap();
        }
        d
    }

    fn err_pos(e: Error) -> (usize, usize, String) {
        match e {
            Error::Parse { line, column, message } => (line, column, message),
            other => panic!("expected a parse error, got {other}"),
        }
    }

    #[test]
    fn upword_literal_grammar() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let w = parse_upword("a b (b a)", &ab).unwrap();
        assert_eq!(w.prefix(), &[0, 1]);
        assert_eq!(w.period(), &[1, 0]);
        assert_eq!(parse_upword("(a)", &ab).unwrap().period(), &[0]);
        let p = Alphabet::product(&[ab.clone(), Alphabet::numeric(2)]);
        let w = parse_upword("(a,0) ((b,1))", &p).unwrap();
        assert_eq!(w.prefix(), &[0]);
        assert_eq!(w.period(), &[3]);
        let w = parse_upword("((a,1) (b,0))", &p).unwrap();
        assert_eq!(w.period(), &[1, 2]);
        assert_eq!(print_upword(&w, &p), "((a,1) (b,0))");
        assert_eq!(print_upword(&parse_upword("a  b(b a )", &ab).unwrap(), &ab), "a b (b a)");
    }

    #[test]
    fn upword_literal_errors() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        assert_eq!(err_pos(parse_upword("a b", &ab).unwrap_err()).1, 4);
        let (_, col, msg) = err_pos(parse_upword("a c (b)", &ab).unwrap_err());
        assert_eq!((col, msg.as_str()), (3, "unknown letter `c`"));
        assert!(parse_upword("(a) b", &ab).is_err());
        assert!(parse_upword("a (b", &ab).is_err());
        assert!(parse_upword("a ()", &ab).is_err());
        assert!(parse_upword("((a))", &ab).is_err());
    }

    #[test]
    fn automaton_document() {
        let text = "\
# infinitely many a
automaton v1
alphabet: a b
states: q0
initial: q0
index: strong 1 2
trans: q0 --a/2--> q0
trans: q0 --b/1--> q0
";
        let d = parse_automaton(text).unwrap();
        assert!(d.accepts(&parse_upword("b (a b)", d.alphabet()).unwrap()));
        assert!(!d.accepts(&parse_upword("a (b)", d.alphabet()).unwrap()));
        assert_eq!(print_automaton(&d), text.lines().skip(1).map(|l| format!("{l}\n")).collect::<String>());
    }

    #[test]
    fn priority_out_of_range_names_the_transition() {
        let text = "automaton v1\nalphabet: a\nstates: q0\ninitial: q0\nindex: strong 1 2\ntrans: q0 --a/5--> q0\n";
        let (line, col, msg) = err_pos(parse_automaton(text).unwrap_err());
        assert_eq!((line, col), (6, 11));
        assert!(msg.contains("q0 --a/5--> q0"), "{msg}");
        assert!(msg.contains("priority 5"), "{msg}");
    }

    #[test]
    fn parse_errors_point_at_tokens() {
        let base = "automaton v1\nalphabet: a\nstates: q0\ninitial: q0\nindex: strong 1 2\n";
        let (line, col, msg) = err_pos(parse_automaton(&format!("{base}trans: q0 --a/1--> q9\n")).unwrap_err());
        assert_eq!((line, col, msg.as_str()), (6, 20, "unknown state `q9`"));
        let (line, _, msg) = err_pos(parse_automaton("automaton v1\nstates: q0\n").unwrap_err());
        assert_eq!((line, msg.as_str()), (2, "expected `alphabet:`, found `states:`"));
        let (_, _, msg) = err_pos(parse_automaton("automaton v2\n").unwrap_err());
        assert!(msg.contains("unsupported format version"));
        let (line, col, _) = err_pos(parse_automaton(&format!("{base}trans: q0 -a/1-> q0\n")).unwrap_err());
        assert_eq!((line, col), (6, 11));
        let (line, _, _) = err_pos(parse_automaton(&format!("{base}index: weak 0 1\n")).unwrap_err());
        assert_eq!(line, 6);
        assert!(parse_automaton("automaton v1\nalphabet: a a\n").is_err());
        assert!(parse_automaton("automaton v1\nalphabet: [a] x b\n").is_err());
    }

    #[test]
    fn alphabet_expressions() {
        for text in ["a b c", "[a b] x [0 1]", "[[0 1] x [u]] x [x y]", "[a]"] {
            assert_eq!(print_alphabet(&parse_alphabet(text).unwrap()), text);
        }
        let p = parse_alphabet("[[0 1] x [u]] x [x y]").unwrap();
        assert_eq!(p.arity(), 2);
        assert_eq!(p.factor(0).arity(), 2);
        assert_eq!(p.symbol("((1,u),y)"), Some(3));
    }

    #[test]
    fn transducer_round_trip_and_errors() {
        let text = "\
transducer v1
input: [a b] x [0 1]
output: 0 1
states: s0 s1
initial: s0
trans: s0 --(a,0)/0--> s0
trans: s0 --(a,1)/0--> s1
trans: s0 --(b,0)/1--> s0
trans: s0 --(b,1)/1--> s1
trans: s1 --(a,0)/1--> s0
trans: s1 --(a,1)/1--> s1
trans: s1 --(b,0)/0--> s0
trans: s1 --(b,1)/0--> s1
";
        let t = parse_transducer(text).unwrap();
        assert_eq!(print_transducer(&t), text);
        let missing: String = text.lines().take(12).map(|l| format!("{l}\n")).collect();
        let (line, _, msg) = err_pos(parse_transducer(&missing).unwrap_err());
        assert_eq!(line, 4);
        assert!(msg.contains("no transition from `s1` on `(b,1)`"), "{msg}");
    }

    #[test]
    fn game_round_trip() {
        let text = "\
game v1
position: 0:q0 I
position: \"with space\" II
initial: \"with space\"
edge: 0:q0 --3--> \"with space\"
edge: \"with space\" --0--> 0:q0
edge: \"with space\" --2--> \"with space\"
";
        let g = parse_game(text).unwrap();
        assert_eq!(g.name(1), "with space");
        assert_eq!(print_game(&g), text);
        assert!(parse_game("game v1\ninitial: v\n").is_err());
        assert!(parse_game("game v1\nposition: v III\n").is_err());
    }

    #[test]
    fn algebra_and_homomorphism_round_trip() {
        let s = WilkeAlgebra::cyclic_group(3);
        assert_eq!(parse_algebra(&print_algebra(&s)).unwrap(), s);
        let d = parse_automaton(
            "automaton v1\nalphabet: a b\nstates: q0\ninitial: q0\nindex: strong 1 2\ntrans: q0 --a/2--> q0\ntrans: q0 --b/1--> q0\n",
        )
        .unwrap();
        let h = algebra_from_dpas(&[d]).unwrap();
        let text = print_homomorphism(&h);
        assert_eq!(parse_homomorphism(&text).unwrap(), h);
        assert_eq!(print_homomorphism(&parse_homomorphism(&text).unwrap()), text);
        let no_witness = Homomorphism { fin_witness: Vec::new(), inf_witness: Vec::new(), ..h };
        assert_eq!(parse_homomorphism(&print_homomorphism(&no_witness)).unwrap(), no_witness);
    }

    #[test]
    fn algebra_tables_are_checked() {
        let text = "algebra v1\nfinite: e\ninfinite: o\nmul: e -> e\nmixed: e -> o\nomega: o\n";
        assert_eq!(print_algebra(&parse_algebra(text).unwrap()), text);
        assert!(parse_algebra("algebra v1\nfinite: e\ninfinite: o\nmul: e -> x\nmixed: e -> o\nomega: o\n").is_err());
        assert!(parse_algebra("algebra v1\nfinite: e\ninfinite: o\nmixed: e -> o\nomega: o\n").is_err());
    }

    #[test]
    fn documents_dispatch_on_their_header() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let w = parse_upword("a (b a)", &ab).unwrap();
        let docs = [
            Document::UpWord(ab.clone(), w),
            Document::Verdict(Verdict::of_bool(true).field("states", 3).field("y", "a (b \"c\")")),
            Document::Algebra(WilkeAlgebra::trivial()),
            Document::Automaton(random_automaton(7)),
        ];
        for doc in docs {
            let text = print_document(&doc);
            let back = parse_document(&text).unwrap();
            assert_eq!(back.kind(), doc.kind());
            assert_eq!(back, doc);
            assert_eq!(print_document(&back), text);
        }
        assert!(parse_document("").is_err());
        assert!(parse_document("picture v1\n").is_err());
        let v = Verdict::parse_line("false witness=(a,0) n=2 y=\"a (b)\"").unwrap();
        assert_eq!(v.get("y"), Some("a (b)"));
        assert_eq!(v.value, "false");
        assert_eq!(v.get("witness"), Some("(a,0)"));
    }

    #[test]
    fn index_literals() {
        assert_eq!(parse_index_literal("P,1,2").unwrap(), ParityIndex::strong(1, 2));
        assert_eq!(parse_index_literal("W,0,3").unwrap(), ParityIndex::weak(0, 3));
        assert_eq!(print_index_literal(&ParityIndex::weak(2, 4)), "W,2,4");
        assert!(parse_index_literal("P,2,1").is_err());
        assert!(parse_index_literal("Q,1,2").is_err());
        assert!(parse_index_literal("P,1").is_err());
    }

    proptest! {
        #[test]
        fn automaton_round_trip(seed in any::<u64>()) {
            let d = random_automaton(seed);
            let text = print_automaton(&d);
            let back = parse_automaton(&text).unwrap();
            prop_assert_eq!(&back, &d);
            prop_assert_eq!(print_automaton(&back), text);
        }

        #[test]
        fn upword_round_trip(prefix in proptest::collection::vec(0usize..4, 0..5), period in proptest::collection::vec(0usize..4, 1..5)) {
            let al = Alphabet::product(&[Alphabet::new(["a", "b"]).unwrap(), Alphabet::numeric(2)]);
            let w = UpWord::new(prefix, period).unwrap();
            let back = parse_upword(&print_upword(&w, &al), &al).unwrap();
            prop_assert_eq!(back.prefix(), w.prefix());
            prop_assert_eq!(back.period(), w.period());
        }
    }
}
