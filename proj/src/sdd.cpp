#include "fmp/sdd.hpp"

#include "fmp/error.hpp"
#include "text.hpp"

#include <cstdlib>
#include <sstream>
#include <unordered_map>

namespace fmp {

namespace {

/// Drops nodes unreachable from `root`, preserving arena order.
std::pair<std::vector<SddNode>, int> compact(const std::vector<SddNode> &nodes,
                                             int root) {
  std::vector<char> live(nodes.size(), 0);
  live[root] = 1;
  for (int i = root; i >= 0; --i) {
    if (!live[i])
      continue;
    for (const auto &e : nodes[i].elements)
      live[e.prime] = live[e.sub] = 1;
  }
  std::vector<int> remap(nodes.size(), -1);
  std::vector<SddNode> out;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (!live[i])
      continue;
    remap[i] = static_cast<int>(out.size());
    SddNode n = nodes[i];
    for (auto &e : n.elements) {
      e.prime = remap[e.prime];
      e.sub = remap[e.sub];
    }
    out.push_back(std::move(n));
  }
  return {std::move(out), remap[root]};
}

} // namespace

void Term::assign(int var, bool value) {
  if (var < 1 || var > num_vars())
    throw Error(ErrorCode::InvalidArgument,
                "term assigns variable " + std::to_string(var) +
                    " outside 1.." + std::to_string(num_vars()));
  auto &slot = values_[var];
  if (slot >= 0 && slot != static_cast<std::int8_t>(value))
    throw Error(ErrorCode::InvalidArgument,
                "inconsistent term on variable " + std::to_string(var));
  slot = value ? 1 : 0;
}

Sdd Sdd::parse_string(const std::string &text, std::shared_ptr<const Vtree> vtree) {
  std::istringstream in(text);
  return parse(in, std::move(vtree));
}

Sdd Sdd::parse(std::istream &in, std::shared_ptr<const Vtree> vtree) {
  if (!vtree)
    throw Error(ErrorCode::InvalidArgument, "sdd needs a vtree");
  auto lines = text::read_lines(in);
  if (lines.empty() || lines[0].tokens[0] != "sdd")
    throw ParseError(ParseIssue::BadHeader, lines.empty() ? 0 : lines[0].number,
                     "expected 'sdd <node-count>'");
  text::expect_arity(lines[0], 2);
  const int declared = text::to_int(lines[0].tokens[1], lines[0].number);
  const int m = vtree->num_vars();

  std::vector<SddNode> nodes;
  std::unordered_map<int, int> index_of_id;
  auto resolve_child = [&](const std::string &token, int line) {
    int id = text::to_int(token, line);
    auto it = index_of_id.find(id);
    if (it == index_of_id.end())
      throw ParseError(ParseIssue::ForwardReference, line,
                       "node " + std::to_string(id) + " is not declared before use");
    return it->second;
  };
  auto resolve_vtree = [&](const std::string &token, int line) {
    int id = text::to_int(token, line);
    int index = vtree->index_of(id);
    if (index < 0)
      throw ParseError(ParseIssue::UnknownVtreeNode, line,
                       "vtree id " + std::to_string(id));
    return index;
  };

  for (size_t l = 1; l < lines.size(); ++l) {
    const auto &line = lines[l];
    const auto &kind = line.tokens[0];
    text::expect_min_arity(line, 2);
    const int id = text::to_int(line.tokens[1], line.number);
    SddNode node;
    if (kind == "F" || kind == "T") {
      text::expect_arity(line, 2);
      node.kind = kind == "T" ? SddKind::True : SddKind::False;
    } else if (kind == "L") {
      text::expect_arity(line, 4);
      node.kind = SddKind::Literal;
      node.vtree = resolve_vtree(line.tokens[2], line.number);
      node.literal = text::to_int(line.tokens[3], line.number);
      int var = std::abs(node.literal);
      if (var < 1 || var > m)
        throw ParseError(ParseIssue::LiteralOutsideVtree, line.number,
                         "literal " + std::to_string(node.literal) +
                             " has no vtree leaf");
      if (vtree->leaf_of(var) != node.vtree)
        throw ParseError(ParseIssue::LiteralOutsideVtree, line.number,
                         "literal " + std::to_string(node.literal) +
                             " is not placed at its variable's leaf");
    } else if (kind == "D") {
      text::expect_min_arity(line, 4);
      node.kind = SddKind::Decision;
      node.vtree = resolve_vtree(line.tokens[2], line.number);
      int count = text::to_int(line.tokens[3], line.number);
      if (count <= 0)
        throw ParseError(ParseIssue::EmptyElements, line.number,
                         "decision node " + std::to_string(id) + " has no elements");
      text::expect_arity(line, 4 + 2 * static_cast<size_t>(count));
      for (int e = 0; e < count; ++e)
        node.elements.push_back(
            {resolve_child(line.tokens[4 + 2 * e], line.number),
             resolve_child(line.tokens[5 + 2 * e], line.number)});
    } else {
      throw ParseError(ParseIssue::Malformed, line.number,
                       "unknown line type '" + kind + "'");
    }
    if (!index_of_id.emplace(id, static_cast<int>(nodes.size())).second)
      throw ParseError(ParseIssue::DuplicateId, line.number,
                       "node id " + std::to_string(id));
    nodes.push_back(std::move(node));
  }
  if (static_cast<int>(nodes.size()) != declared)
    throw ParseError(ParseIssue::CountMismatch, lines[0].number,
                     "header declares " + std::to_string(declared) +
                         " nodes, file has " + std::to_string(nodes.size()));
  if (nodes.empty())
    throw ParseError(ParseIssue::NoRoot, lines[0].number, "sdd has no nodes");

  Sdd sdd;
  sdd.vtree_ = std::move(vtree);
  std::tie(sdd.nodes_, sdd.root_) =
      compact(nodes, static_cast<int>(nodes.size()) - 1);
  check_structure(sdd);
  return sdd;
}

std::string Sdd::serialize() const {
  std::ostringstream out;
  out << "sdd " << size() << '\n';
  for (int i = 0; i < size(); ++i) {
    const auto &n = nodes_[i];
    switch (n.kind) {
    case SddKind::False: out << "F " << i << '\n'; break;
    case SddKind::True: out << "T " << i << '\n'; break;
    case SddKind::Literal:
      out << "L " << i << ' ' << vtree_->node(n.vtree).id << ' ' << n.literal << '\n';
      break;
    case SddKind::Decision:
      out << "D " << i << ' ' << vtree_->node(n.vtree).id << ' ' << n.elements.size();
      for (const auto &e : n.elements)
        out << ' ' << e.prime << ' ' << e.sub;
      out << '\n';
      break;
    }
  }
  return out.str();
}

void check_structure(const Sdd &sdd) {
  const auto &vt = sdd.vtree();
  for (int i = 0; i < sdd.size(); ++i) {
    const auto &n = sdd.node(i);
    if (n.kind == SddKind::Literal) {
      if (n.vtree != vt.leaf_of(std::abs(n.literal)))
        throw ParseError(ParseIssue::LiteralOutsideVtree, 0,
                         "literal " + std::to_string(n.literal) + " misplaced");
      continue;
    }
    if (n.kind != SddKind::Decision)
      continue;
    if (n.elements.empty())
      throw ParseError(ParseIssue::EmptyElements, 0,
                       "decision node " + std::to_string(i) + " has no elements");
    const auto &v = vt.node(n.vtree);
    if (v.is_leaf())
      throw ParseError(ParseIssue::NotDecomposable, 0,
                       "decision node " + std::to_string(i) + " sits at a vtree leaf");
    for (const auto &e : n.elements) {
      const auto &p = sdd.node(e.prime);
      const auto &s = sdd.node(e.sub);
      if (p.vtree >= 0 && !vt.is_within(p.vtree, v.left))
        throw ParseError(ParseIssue::NotDecomposable, 0,
                         "prime of decision node " + std::to_string(i) +
                             " leaves the left vtree");
      if (s.vtree >= 0 && !vt.is_within(s.vtree, v.right))
        throw ParseError(ParseIssue::NotDecomposable, 0,
                         "sub of decision node " + std::to_string(i) +
                             " leaves the right vtree");
    }
  }
}

SddBuilder::SddBuilder(std::shared_ptr<const Vtree> vtree) : vtree_(std::move(vtree)) {
  if (!vtree_)
    throw Error(ErrorCode::InvalidArgument, "sdd needs a vtree");
}

int SddBuilder::constant(bool value) {
  int &slot = constant_[value ? 1 : 0];
  if (slot < 0) {
    slot = static_cast<int>(nodes_.size());
    nodes_.push_back({value ? SddKind::True : SddKind::False, -1, 0, {}});
  }
  return slot;
}

int SddBuilder::literal(int signed_var) {
  int var = std::abs(signed_var);
  if (var < 1 || var > vtree_->num_vars())
    throw Error(ErrorCode::InvalidArgument,
                "literal " + std::to_string(signed_var) + " outside the vtree");
  auto [it, inserted] = literal_.emplace(signed_var, static_cast<int>(nodes_.size()));
  if (inserted)
    nodes_.push_back({SddKind::Literal, vtree_->leaf_of(var), signed_var, {}});
  return it->second;
}

int SddBuilder::decision(int vtree_index, std::vector<SddElement> elements) {
  if (elements.empty())
    throw Error(ErrorCode::InvalidArgument, "decision node without elements");
  for (const auto &e : elements)
    if (e.prime < 0 || e.sub < 0 || e.prime >= static_cast<int>(nodes_.size()) ||
        e.sub >= static_cast<int>(nodes_.size()))
      throw Error(ErrorCode::InvalidArgument, "element refers to an unknown node");
  auto key = std::make_pair(vtree_index, elements);
  auto [it, inserted] = decision_.emplace(std::move(key), static_cast<int>(nodes_.size()));
  if (inserted)
    nodes_.push_back({SddKind::Decision, vtree_index, 0, std::move(elements)});
  return it->second;
}

Sdd SddBuilder::finish(int root) && {
  if (root < 0 || root >= static_cast<int>(nodes_.size()))
    throw Error(ErrorCode::InvalidArgument, "root refers to an unknown node");
  Sdd sdd;
  sdd.vtree_ = vtree_;
  std::tie(sdd.nodes_, sdd.root_) = compact(nodes_, root);
  check_structure(sdd);
  return sdd;
}

bool evaluate(const Sdd &sdd, std::span<const int> point) {
  if (static_cast<int>(point.size()) != sdd.num_vars())
    throw Error(ErrorCode::InvalidArgument,
                "point has " + std::to_string(point.size()) + " values, expected " +
                    std::to_string(sdd.num_vars()));
  std::vector<char> value(sdd.size(), 0);
  for (int i = 0; i < sdd.size(); ++i) {
    const auto &n = sdd.node(i);
    switch (n.kind) {
    case SddKind::False: value[i] = 0; break;
    case SddKind::True: value[i] = 1; break;
    case SddKind::Literal:
      value[i] = (point[std::abs(n.literal) - 1] != 0) == (n.literal > 0);
      break;
    case SddKind::Decision:
      for (const auto &e : n.elements)
        if (value[e.prime] && value[e.sub]) {
          value[i] = 1;
          break;
        }
      break;
    }
  }
  return value[sdd.root()] != 0;
}

namespace {

void check_term(const Sdd &sdd, const Term &term) {
  if (term.num_vars() != sdd.num_vars())
    throw Error(ErrorCode::InvalidArgument,
                "term ranges over " + std::to_string(term.num_vars()) +
                    " variables, diagram over " + std::to_string(sdd.num_vars()));
}

} // namespace

Sdd condition(const Sdd &sdd, const Term &term) {
  check_term(sdd, term);
  SddBuilder b(sdd.vtree_ptr());
  std::vector<int> image(sdd.size(), -1);
  for (int i = 0; i < sdd.size(); ++i) {
    const auto &n = sdd.node(i);
    switch (n.kind) {
    case SddKind::False:
    case SddKind::True: image[i] = b.constant(n.kind == SddKind::True); break;
    case SddKind::Literal: {
      int var = std::abs(n.literal);
      image[i] = term.is_assigned(var) ? b.constant(term.value(var) == (n.literal > 0))
                                       : b.literal(n.literal);
      break;
    }
    case SddKind::Decision: {
      std::vector<SddElement> kept;
      bool any_sub = false;
      for (const auto &e : n.elements) {
        int p = image[e.prime];
        if (b.node(p).kind == SddKind::False)
          continue;
        int s = image[e.sub];
        any_sub = any_sub || b.node(s).kind != SddKind::False;
        kept.push_back({p, s});
      }
      image[i] = (kept.empty() || !any_sub) ? b.constant(false)
                                            : b.decision(n.vtree, std::move(kept));
      break;
    }
    }
  }
  return std::move(b).finish(image[sdd.root()]);
}

Sdd negate(const Sdd &sdd) {
  SddBuilder b(sdd.vtree_ptr());
  std::vector<int> copy(sdd.size(), -1);
  std::vector<int> neg(sdd.size(), -1);
  for (int i = 0; i < sdd.size(); ++i) {
    const auto &n = sdd.node(i);
    switch (n.kind) {
    case SddKind::False:
    case SddKind::True: {
      bool v = n.kind == SddKind::True;
      copy[i] = b.constant(v);
      neg[i] = b.constant(!v);
      break;
    }
    case SddKind::Literal:
      copy[i] = b.literal(n.literal);
      neg[i] = b.literal(-n.literal);
      break;
    case SddKind::Decision: {
      std::vector<SddElement> same, flipped;
      for (const auto &e : n.elements) {
        same.push_back({copy[e.prime], copy[e.sub]});
        flipped.push_back({copy[e.prime], neg[e.sub]});
      }
      copy[i] = b.decision(n.vtree, std::move(same));
      neg[i] = b.decision(n.vtree, std::move(flipped));
      break;
    }
    }
  }
  return std::move(b).finish(neg[sdd.root()]);
}

namespace {

bool consistent_pass(const Sdd &sdd, const Term *fixed) {
  std::vector<char> ok(sdd.size(), 0);
  for (int i = 0; i < sdd.size(); ++i) {
    const auto &n = sdd.node(i);
    switch (n.kind) {
    case SddKind::False: ok[i] = 0; break;
    case SddKind::True: ok[i] = 1; break;
    case SddKind::Literal: {
      int var = std::abs(n.literal);
      ok[i] = !fixed || !fixed->is_assigned(var) ||
              fixed->value(var) == (n.literal > 0);
      break;
    }
    case SddKind::Decision:
      for (const auto &e : n.elements)
        if (ok[e.prime] && ok[e.sub]) {
          ok[i] = 1;
          break;
        }
      break;
    }
  }
  return ok[sdd.root()] != 0;
}

} // namespace

bool is_consistent(const Sdd &sdd) { return consistent_pass(sdd, nullptr); }

bool consistency_under(const Sdd &sdd, const Term &fixed) {
  check_term(sdd, fixed);
  return consistent_pass(sdd, &fixed);
}

Sdd compile_truth_table(std::shared_ptr<const Vtree> vtree,
                        const std::vector<bool> &table) {
  const int m = vtree->num_vars();
  if (m > 24)
    throw Error(ErrorCode::Limit, "truth-table compilation is limited to 24 variables");
  if (table.size() != (size_t{1} << m))
    throw Error(ErrorCode::InvalidArgument, "truth table size must be 2^m");

  // Re-index the table so bit j follows the j-th vtree leaf from the left.
  const auto order = vtree->vars_below(vtree->root());
  std::vector<bool> local(table.size());
  for (size_t idx = 0; idx < table.size(); ++idx) {
    size_t global = 0;
    for (int j = 0; j < m; ++j)
      if (idx >> j & 1)
        global |= size_t{1} << (order[j] - 1);
    local[idx] = table[global];
  }

  SddBuilder b(vtree);
  std::map<std::pair<int, std::vector<bool>>, int> memo;
  auto compile = [&](auto &&self, int v, const std::vector<bool> &f) -> int {
    bool all_true = true, all_false = true;
    for (bool bit : f) {
      all_true = all_true && bit;
      all_false = all_false && !bit;
    }
    if (all_true || all_false)
      return b.constant(all_true);
    auto key = std::make_pair(v, f);
    if (auto it = memo.find(key); it != memo.end())
      return it->second;
    const auto &node = vtree->node(v);
    int result;
    if (node.is_leaf()) {
      result = b.literal(f[1] ? node.var : -node.var);
    } else {
      const size_t left_bits = vtree->vars_below(node.left).size();
      const size_t right_bits = vtree->vars_below(node.right).size();
      const size_t left_size = size_t{1} << left_bits;
      const size_t right_size = size_t{1} << right_bits;
      std::vector<std::vector<bool>> cofactors;
      std::vector<std::vector<bool>> primes;
      for (size_t x = 0; x < left_size; ++x) {
        std::vector<bool> c(right_size);
        for (size_t y = 0; y < right_size; ++y)
          c[y] = f[x | (y << left_bits)];
        size_t g = 0;
        while (g < cofactors.size() && cofactors[g] != c)
          ++g;
        if (g == cofactors.size()) {
          cofactors.push_back(std::move(c));
          primes.emplace_back(left_size, false);
        }
        primes[g][x] = true;
      }
      if (cofactors.size() == 1) {
        result = self(self, node.right, cofactors[0]);
      } else {
        std::vector<SddElement> elements;
        for (size_t g = 0; g < cofactors.size(); ++g)
          elements.push_back({self(self, node.left, primes[g]),
                              self(self, node.right, cofactors[g])});
        result = b.decision(v, std::move(elements));
      }
    }
    memo.emplace(std::move(key), result);
    return result;
  };
  int root = compile(compile, vtree->root(), local);
  return std::move(b).finish(root);
}

} // namespace fmp
