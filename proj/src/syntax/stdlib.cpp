#include "probsched/syntax/stdlib.hpp"

#include <map>

#include "probsched/syntax/parser.hpp"

namespace probsched::stdlib {

namespace {

struct Entry {
  const char* name;
  const char* text;
};

// Every definition is closed; none refers to another library name.
constexpr Entry kEntries[] = {
    {"par_wait", "rec par_wait c = match !c with inl _ -> par_wait c | inr v -> v end"},
    {"spin_acquire", "rec spin_acquire l = if cas l false true then () else spin_acquire l"},
    {"list_init",
     "fun n f -> let rec go i = if i < n then (let x = f i in x :: go (i + 1)) else [] in go 0"},
    {"list_iter", "rec list_iter f l = match l with [] -> () | x :: xs -> f x; list_iter f xs end"},
    {"list_length", "rec list_length l = match l with [] -> 0 | _ :: xs -> 1 + list_length xs end"},
    {"array_init", "fun n v -> array n v"},
    {"assoc_lookup",
     "rec assoc_lookup l k = match l with\n"
     "  [] -> None\n"
     "| kv :: rest -> if fst kv == k then Some (snd kv) else assoc_lookup rest k\n"
     "end"},
};

const std::map<std::string, Value, std::less<>>& table() {
  static const std::map<std::string, Value, std::less<>> t = [] {
    std::map<std::string, Value, std::less<>> m;
    for (const auto& e : kEntries) {
      Expr v = parse_core(e.text);
      if (!v->is_value()) throw std::logic_error(std::string("library entry is not a value: ") + e.name);
      m.emplace(e.name, std::move(v));
    }
    return m;
  }();
  return t;
}

}  // namespace

const Value& par_wait() { return table().find("par_wait")->second; }
const Value& acquire() { return table().find("spin_acquire")->second; }

std::optional<Value> lookup(std::string_view name) {
  const auto& t = table();
  auto it = t.find(name);
  if (it == t.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& e : kEntries) out.emplace_back(e.name);
  return out;
}

std::string_view source() {
  static const std::string text = [] {
    std::string s;
    for (const auto& e : kEntries) {
      s += "let ";
      s += e.name;
      s += " = ";
      s += e.text;
      s += "\n\n";
    }
    return s;
  }();
  return text;
}

}  // namespace probsched::stdlib

namespace probsched {

bool is_stdlib_name(std::string_view name) {
  for (const auto& e : stdlib::kEntries) {
    if (name == e.name) return true;
  }
  return false;
}

}  // namespace probsched
