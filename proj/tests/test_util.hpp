#pragma once

#include <pthread.h>

#include <cctype>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "rowsub/syntax.hpp"

namespace rowsub::testing {

// Deeply divergent generated programs can nest thousands of evaluator and
// solver frames before the fuel runs out; property batteries run on a big
// dedicated stack so the default thread limit is not part of the semantics
// under test.
inline void run_on_large_stack(const std::function<void()>& body) {
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, 512 * 1024 * 1024);
  pthread_t thread;
  auto trampoline = [](void* p) -> void* {
    (*static_cast<const std::function<void()>*>(p))();
    return nullptr;
  };
  if (pthread_create(&thread, &attr, trampoline, const_cast<std::function<void()>*>(&body)) == 0)
    pthread_join(thread, nullptr);
  else
    body();  // fall back to the current stack
  pthread_attr_destroy(&attr);
}

// Rewrites variable names ('a, 'r0, 'f1, ...) to canonical ones assigned in
// order of first appearance, per kind. Fresh-variable numbering is an
// implementation artifact, so type outputs and traces are compared after
// this pass.
inline std::string normalize_var_names(const std::string& text) {
  std::map<std::string, std::string> renamed;
  size_t types = 0, rows = 0, fields = 0;
  std::string out;
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '\'') {
      out += text[i++];
      continue;
    }
    size_t j = i + 1;
    while (j < text.size() && std::islower(static_cast<unsigned char>(text[j]))) ++j;
    size_t letters_end = j;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (letters_end == i + 1) {  // bare quote
      out += text[i++];
      continue;
    }
    std::string token = text.substr(i, j - i);
    auto it = renamed.find(token);
    if (it == renamed.end()) {
      std::string fresh;
      bool digits = j != letters_end;
      if (digits && text[i + 1] == 'r' && letters_end == i + 2)
        fresh = "'r" + std::to_string(rows++);
      else if (digits && text[i + 1] == 'f' && letters_end == i + 2)
        fresh = "'f" + std::to_string(fields++);
      else
        fresh = "'" + std::string(1, static_cast<char>('a' + types % 26)) +
                (types >= 26 ? std::to_string(types / 26) : ""),
        ++types;
      it = renamed.emplace(token, fresh).first;
    }
    out += it->second;
    i = j;
  }
  return out;
}

// Deterministic generator of well-formed closed terms, biased toward terms
// the type checker accepts. Let rec right-hand sides are always lambdas so
// accepted terms are also evaluable.
class TermGen {
 public:
  explicit TermGen(unsigned seed) : rng_(seed) {}

  Term closed_term(int max_depth) {
    std::vector<std::string> scope;
    return gen(max_depth, scope);
  }

  Term record_literal(int max_fields, int max_depth) {
    std::vector<std::string> scope;
    return gen_record(max_fields, max_depth, scope);
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::string fresh_name() { return "v" + std::to_string(counter_++); }

  std::string some_label() {
    static const char* labels[] = {"x", "y", "z", "w"};
    return labels[pick(4)];
  }

  Term gen_leaf(std::vector<std::string>& scope) {
    if (!scope.empty() && pick(3) == 0) return make_var(scope[pick(static_cast<int>(scope.size()))]);
    if (pick(3) == 0) return gen_record(2, 0, scope);
    return make_int_lit(std::to_string(pick(100)));
  }

  Term gen_record(int max_fields, int depth, std::vector<std::string>& scope) {
    std::vector<std::pair<std::string, Term>> fields;
    std::vector<std::string> labels = {"x", "y", "z", "w"};
    int n = pick(max_fields + 1);
    for (int i = 0; i < n; ++i) fields.emplace_back(labels[static_cast<size_t>(i)], gen(depth, scope));
    return make_record(std::move(fields));
  }

  Term gen(int depth, std::vector<std::string>& scope) {
    if (depth <= 0) return gen_leaf(scope);
    switch (pick(8)) {
      case 0: {  // lambda
        std::string param = fresh_name();
        scope.push_back(param);
        Term body = gen(depth - 1, scope);
        scope.pop_back();
        return make_lam(param, body);
      }
      case 1: {  // beta redex, usually well-typed
        std::string param = fresh_name();
        scope.push_back(param);
        Term body = gen(depth - 1, scope);
        scope.pop_back();
        return make_app(make_lam(param, body), gen(depth - 1, scope));
      }
      case 2: {  // projection from a literal that has the label
        std::string label = some_label();
        std::vector<std::pair<std::string, Term>> fields{{label, gen(depth - 1, scope)}};
        if (pick(2) == 0 && label != "w") fields.emplace_back("w", gen(depth - 1, scope));
        return make_proj(make_record(std::move(fields)), label);
      }
      case 3:  // extension
        return make_extend(gen_record(2, depth - 1, scope), some_label(), gen(depth - 1, scope));
      case 4: {  // let rec of a lambda
        std::string name = fresh_name();
        std::string param = fresh_name();
        scope.push_back(name);
        scope.push_back(param);
        Term lam_body = gen(depth - 1, scope);
        scope.pop_back();
        Term body = gen(depth - 1, scope);
        scope.pop_back();
        return make_let_rec(name, make_lam(param, lam_body), body);
      }
      case 5:
        return gen_record(3, depth - 1, scope);
      case 6: {  // application of something in scope (may be ill-typed)
        if (scope.empty()) return gen_leaf(scope);
        return make_app(make_var(scope[pick(static_cast<int>(scope.size()))]), gen(depth - 1, scope));
      }
      default:
        return gen_leaf(scope);
    }
  }

  std::mt19937 rng_;
  int counter_ = 0;
};

}  // namespace rowsub::testing
