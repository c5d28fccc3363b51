//! TOML input files: operad presentations, an algebra, modules, subalgebras and morphisms.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use opalg::exactalg::{svec_from_map, SVec, SparseMatrix};
use opalg::operad_core::tree::{add_term, Tree, TreeVec};
use opalg::operad_core::{classical_presentation, ClassicalOperad, OperadPresentation, SigmaObject};
use opalg::palgebra::{regular_module, trivial_module, AlgebraMorphism, PAlgebra, PModule};
use opalg::seminf::SemiInfiniteStructure;
use opalg::symcore::SigmaRep;
use opalg::Scalar;

#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<opalg::Error> for InputError {
    fn from(e: opalg::Error) -> Self {
        InputError(e.to_string())
    }
}

fn err<T>(msg: impl Into<String>) -> Result<T, InputError> {
    Err(InputError(msg.into()))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub operad: Option<OperadBlock>,
    pub algebra: Option<AlgebraBlock>,
    pub module: Option<ModuleBlock>,
    #[serde(default)]
    pub subalgebra: BTreeMap<String, SubalgebraBlock>,
    pub morphism: Option<MorphismBlock>,
    pub seminf: Option<SeminfBlock>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperadBlock {
    pub tag: Option<String>,
    pub name: Option<String>,
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub relations: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    /// `symmetric`, `antisymmetric`, or `none` (adds `name` and `name'`, swapped by Σ₂).
    #[serde(default = "default_symmetry")]
    pub symmetry: String,
}

fn default_symmetry() -> String {
    "none".into()
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraBlock {
    pub name: Option<String>,
    pub operad: Option<String>,
    #[serde(default)]
    pub basis: Vec<String>,
    #[serde(default)]
    pub weights: Vec<i64>,
    #[serde(default)]
    pub brackets: BTreeMap<String, String>,
    #[serde(default)]
    pub products: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleBlock {
    /// `trivial`, `regular`, or `explicit`.
    #[serde(default = "default_module_kind")]
    pub kind: String,
    #[serde(default)]
    pub basis: Vec<String>,
    #[serde(default)]
    pub weights: Vec<i64>,
    /// Generator name (`left.x` / `right.x` for Asc) → basis vector → image.
    #[serde(default)]
    pub action: BTreeMap<String, BTreeMap<String, String>>,
}

fn default_module_kind() -> String {
    "trivial".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubalgebraBlock {
    pub span: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismBlock {
    pub source: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeminfBlock {
    pub algebra: Option<String>,
    pub base: String,
    pub complement: String,
}

pub fn read_input(path: &Path) -> Result<InputFile, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {}", path.display(), e)))?;
    parse_input(&text).map_err(|e| InputError(format!("{}: {}", path.display(), e)))
}

pub fn parse_input(text: &str) -> Result<InputFile, InputError> {
    toml::from_str(text).map_err(|e| InputError(format!("syntax error: {}", e)))
}

/// Parses `3`, `-2`, `1/2` into a field element.
pub fn parse_scalar<F: Scalar>(s: &str) -> Result<F, InputError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = num.parse().map_err(|_| InputError(format!("bad coefficient `{}`", s)))?;
    let d: i64 = den.parse().map_err(|_| InputError(format!("bad coefficient `{}`", s)))?;
    match F::from_i64(d).inv() {
        Some(inv) => Ok(F::from_i64(n) * inv),
        None => err(format!("coefficient `{}` has a denominator that vanishes over {}", s, F::field_name())),
    }
}

/// Splits `2*e - h + 1/2 f` into signed terms `(coefficient text, rest)`.
fn split_terms(s: &str) -> Result<Vec<(String, String)>, InputError> {
    let mut terms = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    let mut sign = "+".to_string();
    let flush = |sign: &str, current: &str, terms: &mut Vec<(String, String)>| -> Result<(), InputError> {
        let body = current.trim();
        if body.is_empty() {
            return err(format!("empty term in `{}`", s));
        }
        let (coef, rest) = match body.find(|c: char| !(c.is_ascii_digit() || c == '/' || c.is_whitespace())) {
            Some(0) => ("1".to_string(), body.to_string()),
            Some(i) => (body[..i].trim().to_string(), body[i..].trim_start_matches('*').trim().to_string()),
            None => (body.to_string(), String::new()),
        };
        let coef = if coef.is_empty() { "1".to_string() } else { coef };
        terms.push((format!("{}{}", if sign == "-" { "-" } else { "" }, coef), rest));
        Ok(())
    };
    for c in s.chars() {
        match c {
            '(' => {
                depth += 1;
                current.push(c);
            }
            ')' => {
                depth -= 1;
                current.push(c);
            }
            '+' | '-' if depth == 0 => {
                if !current.trim().is_empty() {
                    flush(&sign, &current, &mut terms)?;
                } else if sign == "-" && c == '-' {
                    sign = "+".into();
                    continue;
                }
                current.clear();
                sign = c.to_string();
            }
            _ => current.push(c),
        }
    }
    if depth != 0 {
        return err(format!("unbalanced parentheses in `{}`", s));
    }
    if !current.trim().is_empty() {
        flush(&sign, &current, &mut terms)?;
    }
    Ok(terms)
}

/// A linear combination of named basis vectors; `0` is the zero vector.
pub fn parse_combination<F: Scalar>(s: &str, names: &[String]) -> Result<SVec<F>, InputError> {
    let mut acc: BTreeMap<usize, F> = BTreeMap::new();
    if s.trim() == "0" {
        return Ok(Vec::new());
    }
    for (coef, name) in split_terms(s)? {
        let c: F = parse_scalar(&coef)?;
        let i = lookup(names, &name)?;
        let e = acc.entry(i).or_insert_with(F::zero);
        *e += c;
    }
    Ok(svec_from_map(acc))
}

fn lookup(names: &[String], name: &str) -> Result<usize, InputError> {
    names.iter().position(|n| n == name).ok_or_else(|| InputError(format!("unknown basis element `{}`", name)))
}

pub fn operad_tag(tag: &str) -> Result<ClassicalOperad, InputError> {
    ClassicalOperad::from_str(tag).map_err(|_| InputError(format!("unknown operad tag `{}`", tag)))
}

/// An operad given either as a built-in tag or as a TOML file with an `[operad]` block.
pub fn load_operad<F: Scalar>(target: &str) -> Result<OperadPresentation<F>, InputError> {
    if let Ok(kind) = ClassicalOperad::from_str(target) {
        return Ok(classical_presentation(kind));
    }
    let path = Path::new(target);
    if !path.exists() {
        return err(format!("`{}` is neither an operad tag (com, asc, lie) nor a file", target));
    }
    let input = read_input(path)?;
    match &input.operad {
        Some(block) => operad_from_block(block),
        None => err(format!("{}: no [operad] block", target)),
    }
}

pub fn operad_from_block<F: Scalar>(block: &OperadBlock) -> Result<OperadPresentation<F>, InputError> {
    if let Some(tag) = &block.tag {
        if !block.generators.is_empty() || !block.relations.is_empty() {
            return err("[operad] takes either `tag` or `generators`/`relations`, not both");
        }
        return Ok(classical_presentation(operad_tag(tag)?));
    }
    if block.generators.is_empty() {
        return err("[operad] needs a `tag` or at least one generator");
    }
    // Binary generators: one Σ₂-summand per entry.
    let mut names: Vec<String> = Vec::new();
    let mut blocks: Vec<SparseMatrix<F>> = Vec::new();
    for g in &block.generators {
        match g.symmetry.as_str() {
            "symmetric" => {
                names.push(g.name.clone());
                blocks.push(SparseMatrix::identity(1));
            }
            "antisymmetric" => {
                names.push(g.name.clone());
                blocks.push(SparseMatrix::identity(1).scale(&-F::one()));
            }
            "none" => {
                names.push(g.name.clone());
                names.push(format!("{}'", g.name));
                blocks.push(SparseMatrix::from_triplets(2, 2, [(0, 1, F::one()), (1, 0, F::one())]));
            }
            other => return err(format!("generator `{}`: unknown symmetry `{}`", g.name, other)),
        }
    }
    let d = names.len();
    let mut entries = Vec::new();
    let mut offset = 0;
    for b in &blocks {
        for (r, c, x) in b.entries() {
            entries.push((offset + r, offset + c, x.clone()));
        }
        offset += b.rows();
    }
    let rep = SigmaRep::new(2, vec![0; d], vec![SparseMatrix::from_triplets(d, d, entries)])?;
    let mut generators = SigmaObject::zero(2);
    generators.set(rep, Some(names.clone()), None);
    let mut relations = Vec::new();
    for r in &block.relations {
        let v = parse_tree_combination::<F>(r, &names)?;
        let arity = v.keys().next().map_or(0, |t| t.leaf_count());
        if v.keys().any(|t| t.leaf_count() != arity) {
            return err(format!("relation `{}` mixes arities", r));
        }
        relations.push((arity, v));
    }
    Ok(OperadPresentation { name: block.name.clone().unwrap_or_else(|| "custom".into()), generators, relations })
}

fn parse_tree_combination<F: Scalar>(s: &str, names: &[String]) -> Result<TreeVec<F>, InputError> {
    let mut v = TreeVec::new();
    for (coef, body) in split_terms(s)? {
        let c: F = parse_scalar(&coef)?;
        let mut chars = body.chars().filter(|c| !c.is_whitespace()).peekable();
        let t = parse_tree(&mut chars, names)?;
        if chars.next().is_some() {
            return err(format!("trailing input in `{}`", body));
        }
        let n = t.leaf_count();
        let mut leaves = t.leaves();
        leaves.sort_unstable();
        if leaves != (0..n).collect::<Vec<_>>() {
            return err(format!("`{}` must use each leaf 1..{} exactly once", body, n));
        }
        add_term(&mut v, t, c);
    }
    Ok(v)
}

fn parse_tree(chars: &mut std::iter::Peekable<impl Iterator<Item = char>>, names: &[String]) -> Result<Tree, InputError> {
    let mut token = String::new();
    while let Some(&c) = chars.peek() {
        if c == '(' || c == ')' || c == ',' {
            break;
        }
        token.push(c);
        chars.next();
    }
    if let Ok(leaf) = token.parse::<usize>() {
        if leaf == 0 {
            return err("leaves are numbered from 1");
        }
        return Ok(Tree::Leaf(leaf - 1));
    }
    let decoration = lookup(names, &token).map_err(|_| InputError(format!("unknown generator `{}`", token)))?;
    if chars.next() != Some('(') {
        return err(format!("expected `(` after `{}`", token));
    }
    let mut children = vec![parse_tree(chars, names)?];
    while chars.peek() == Some(&',') {
        chars.next();
        children.push(parse_tree(chars, names)?);
    }
    if chars.next() != Some(')') {
        return err(format!("expected `)` closing `{}`", token));
    }
    if children.len() != 2 {
        return err(format!("generator `{}` is binary, got {} inputs", token, children.len()));
    }
    Ok(Tree::Node { arity: 2, decoration, children })
}

fn pair(key: &str, names: &[String]) -> Result<(usize, usize), InputError> {
    let (x, y) = key.split_once(',').ok_or_else(|| InputError(format!("table key `{}` must be `x,y`", key)))?;
    Ok((lookup(names, x.trim())?, lookup(names, y.trim())?))
}

pub fn algebra_from_block<F: Scalar>(block: &AlgebraBlock, operad: Option<&OperadBlock>) -> Result<PAlgebra<F>, InputError> {
    let tag = match (&block.operad, operad.and_then(|o| o.tag.as_ref())) {
        (Some(t), _) | (None, Some(t)) => t.clone(),
        (None, None) => return err("[algebra] needs `operad` (com, asc or lie)"),
    };
    let kind = operad_tag(&tag)?;
    let names = block.basis.clone();
    let weights = if block.weights.is_empty() { vec![0; names.len()] } else { block.weights.clone() };
    if weights.len() != names.len() {
        return err(format!("{} weights for {} basis elements", weights.len(), names.len()));
    }
    let table_src = match (kind, block.brackets.is_empty(), block.products.is_empty()) {
        (_, true, true) => &block.products,
        (ClassicalOperad::Lie, false, true) => &block.brackets,
        (ClassicalOperad::Lie, _, false) => return err("a Lie algebra takes `brackets`, not `products`"),
        (_, false, _) => return err(format!("a {} algebra takes `products`, not `brackets`", kind)),
        (_, true, false) => &block.products,
    };
    let mut given: BTreeMap<(usize, usize), SVec<F>> = BTreeMap::new();
    for (key, value) in table_src {
        let (i, j) = pair(key, &names)?;
        if given.contains_key(&(i, j)) {
            return err(format!("pair ({},{}) given twice", names[i], names[j]));
        }
        given.insert((i, j), parse_combination(value, &names)?);
    }
    let neg = |v: &SVec<F>| -> SVec<F> { v.iter().map(|(k, x)| (*k, -x.clone())).collect() };
    for (&(i, j), v) in &given {
        let bad = match kind {
            ClassicalOperad::Lie if i == j => !v.is_empty(),
            ClassicalOperad::Lie => given.get(&(j, i)).is_some_and(|w| *w != neg(v)),
            ClassicalOperad::Com => given.get(&(j, i)).is_some_and(|w| w != v),
            ClassicalOperad::Asc => false,
        };
        if bad {
            let rule = if kind == ClassicalOperad::Lie { "antisymmetry" } else { "commutativity" };
            return err(format!("bracket table violates {} at the pair ({},{})", rule, names[i], names[j]));
        }
    }
    let table: Vec<(usize, usize, SVec<F>)> = given.into_iter().map(|((i, j), v)| (i, j, v)).collect();
    Ok(PAlgebra::from_table(kind, names, weights, &table)?)
}

pub fn module_from_block<F: Scalar>(block: Option<&ModuleBlock>, a: &PAlgebra<F>) -> Result<PModule<F>, InputError> {
    let Some(block) = block else { return Ok(trivial_module(a)) };
    match block.kind.as_str() {
        "trivial" => Ok(trivial_module(a)),
        "regular" | "adjoint" => Ok(regular_module(a)),
        "explicit" => {
            let names = block.basis.clone();
            let weights = if block.weights.is_empty() { vec![0; names.len()] } else { block.weights.clone() };
            if weights.len() != names.len() {
                return err(format!("{} module weights for {} basis elements", weights.len(), names.len()));
            }
            let generators: Vec<String> = match a.kind {
                ClassicalOperad::Asc => a.names.iter().map(|x| format!("left.{}", x)).chain(a.names.iter().map(|x| format!("right.{}", x))).collect(),
                _ => a.names.clone(),
            };
            let d = names.len();
            let mut actions = vec![SparseMatrix::zero(d, d); generators.len()];
            for (g, table) in &block.action {
                let gi = generators.iter().position(|x| x == g).ok_or_else(|| InputError(format!("unknown action generator `{}`", g)))?;
                let mut entries = Vec::new();
                for (v, image) in table {
                    let c = lookup(&names, v)?;
                    for (r, x) in parse_combination::<F>(image, &names)? {
                        entries.push((r, c, x));
                    }
                }
                actions[gi] = SparseMatrix::from_triplets(d, d, entries);
            }
            Ok(PModule::new(a.kind, names, weights, actions))
        }
        other => err(format!("unknown module kind `{}`", other)),
    }
}

/// The algebra of the file together with everything that refers to it.
pub struct Session<F: Scalar> {
    pub algebra: PAlgebra<F>,
    pub module: PModule<F>,
    pub input: InputFile,
}

impl<F: Scalar> Session<F> {
    pub fn load(path: &Path) -> Result<Self, InputError> {
        let input = read_input(path)?;
        let block = input.algebra.as_ref().ok_or_else(|| InputError("no [algebra] block".into()))?;
        let algebra = algebra_from_block(block, input.operad.as_ref())?;
        let module = module_from_block(input.module.as_ref(), &algebra)?;
        Ok(Session { algebra, module, input })
    }

    /// Subalgebra by name; `zero` is the trivial subalgebra and `all` the whole algebra.
    pub fn subalgebra(&self, name: &str) -> Result<AlgebraMorphism<F>, InputError> {
        match name {
            "zero" => Ok(AlgebraMorphism::from_zero(&self.algebra)),
            "all" => Ok(AlgebraMorphism::identity(&self.algebra)),
            _ => {
                let block = self.input.subalgebra.get(name).ok_or_else(|| InputError(format!("dangling reference to subalgebra `{}`", name)))?;
                let idx = self.span(&block.span)?;
                Ok(self.algebra.subalgebra(&idx)?.1)
            }
        }
    }

    fn span(&self, span: &[String]) -> Result<Vec<usize>, InputError> {
        span.iter().map(|x| lookup(&self.algebra.names, x)).collect()
    }

    /// The morphism of `[morphism]`, defaulting to the trivial subalgebra.
    pub fn morphism(&self) -> Result<AlgebraMorphism<F>, InputError> {
        self.subalgebra(self.input.morphism.as_ref().map_or("zero", |m| m.source.as_str()))
    }

    pub fn seminf(&self) -> Result<SemiInfiniteStructure<F>, InputError> {
        let block = self.input.seminf.as_ref().ok_or_else(|| InputError("no [seminf] block".into()))?;
        if let (Some(want), Some(have)) = (&block.algebra, self.input.algebra.as_ref().and_then(|a| a.name.as_ref())) {
            if want != have {
                return err(format!("dangling reference: [seminf] names algebra `{}`, the file defines `{}`", want, have));
            }
        }
        let base = self.subalgebra(&block.base)?;
        let complement = self.subalgebra(&block.complement)?;
        Ok(SemiInfiniteStructure::new(base, complement)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use opalg::palgebra::{check_algebra, sl2};
    use opalg::{Rational, F7};

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn combinations() {
        let n = names(&["e", "h", "f"]);
        let v: SVec<Rational> = parse_combination("2*e - h + 1/2 f - e", &n).unwrap();
        let want: SVec<Rational> = vec![(0, Rational::from_i64(1)), (1, Rational::from_i64(-1)), (2, parse_scalar("1/2").unwrap())];
        assert_eq!(v, want);
        assert!(parse_combination::<Rational>("0", &n).unwrap().is_empty());
        assert!(parse_combination::<Rational>("e - e", &n).unwrap().is_empty());
        assert!(parse_combination::<Rational>("2*g", &n).is_err());
        assert!(parse_scalar::<F7>("1/7").is_err());
        assert_eq!(parse_scalar::<F7>("1/2").unwrap(), F7::new(4));
    }

    #[test]
    fn sl2_table_matches_builtin() {
        let text = r#"
            [algebra]
            operad = "lie"
            basis = ["e", "h", "f"]
            weights = [2, 0, -2]
            [algebra.brackets]
            "h,e" = "2*e"
            "h,f" = "-2*f"
            "e,f" = "h"
        "#;
        let input = parse_input(text).unwrap();
        let a: PAlgebra<Rational> = algebra_from_block(input.algebra.as_ref().unwrap(), None).unwrap();
        assert_eq!(a.product, sl2::<Rational>().product);
        assert!(check_algebra(&a).is_ok());
    }

    #[test]
    fn antisymmetry_is_checked_at_parse_time() {
        let text = "[algebra]\noperad = \"lie\"\nbasis = [\"a\", \"b\"]\n[algebra.brackets]\n\"a,b\" = \"a\"\n\"b,a\" = \"a\"\n";
        let input = parse_input(text).unwrap();
        let e = algebra_from_block::<Rational>(input.algebra.as_ref().unwrap(), None).unwrap_err();
        assert!(e.0.contains("(a,b)"), "{}", e);
    }

    #[test]
    fn hand_written_presentation() {
        let block = OperadBlock {
            tag: None,
            name: Some("assoc".into()),
            generators: vec![GeneratorSpec { name: "m".into(), symmetry: "none".into() }],
            relations: vec!["m(m(1,2),3) - m(1,m(2,3))".into()],
        };
        let p: OperadPresentation<Rational> = operad_from_block(&block).unwrap();
        assert_eq!(p.generators.dim(2), 2);
        assert_eq!(p.relations.len(), 1);
        assert!(p.is_binary_quadratic());
        let bad = OperadBlock { relations: vec!["m(m(1,2),2)".into()], ..block };
        assert!(operad_from_block::<Rational>(&bad).is_err());
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(parse_input("[algebra]\nbasiz = []\n").is_err());
        let e = parse_input("[algebra\n").unwrap_err();
        assert!(e.0.contains("line 1"), "{}", e);
    }
}
