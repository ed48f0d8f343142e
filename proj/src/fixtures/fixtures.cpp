#include "probsched/fixtures/fixtures.hpp"

#include <algorithm>
#include <cctype>

#include "probsched/analytics/bloom.hpp"

namespace probsched {

UnknownFixture::UnknownFixture(const std::string& name)
    : std::invalid_argument([&] {
        std::string msg = "unknown fixture '" + name + "'; available:";
        for (const auto& f : catalogue()) msg += " " + f.name;
        return msg;
      }()) {}

std::string normalize_fixture_name(std::string_view name) {
  std::string out;
  for (char c : name) out += c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string counter_module(int impl) {
  std::string common =
      "let createcounter = fun _ -> ref 0 in\n"
      "let readcounter = fun l -> !l in\n";
  switch (impl) {
    case 1:
      return common +
             "let createtape = fun _ -> alloctape 3 in\n"
             "let incrcounter = fun l lbl -> faa l (rand lbl 3) in\n";
    case 2:
      return common +
             "let createtape = fun _ -> alloctape 1 in\n"
             "let incrcounter = fun l lbl ->\n"
             "  let lbl = alloctape 1 in\n"
             "  faa l (rand lbl 1 * 2 + rand lbl 1) in\n";
    case 3:
      return common +
             "let createtape = fun _ -> alloctape 4 in\n"
             "let incrcounter = rec f l lbl =\n"
             "  let x = rand lbl 4 in\n"
             "  if x < 4 then faa l x else f l lbl in\n";
    default:
      throw std::invalid_argument("counter implementations are 1, 2 and 3");
  }
}

std::string hash_module(std::int64_t values, bool taped) {
  if (values < 1) throw std::invalid_argument("hash needs at least one value");
  const std::string bound = std::to_string(values - 1);
  const std::string draw = taped ? "rand lbl " + bound : "rand " + bound;
  return "let hash_init = fun _ ->\n"
         "  let lo = newlock () in\n"
         "  let lm = ref [] in\n"
         "  (lo, lm) in\n"
         "let hash = fun (lo, lm) k " +
         std::string(taped ? "lbl " : "") +
         "->\n"
         "  acquire lo;\n"
         "  let v = match assoc_lookup !lm k with\n"
         "    | None -> let b = " +
         draw +
         " in lm := (k, b) :: !lm; b\n"
         "    | Some b -> b\n"
         "  end in\n"
         "  release lo; v in\n";
}

namespace {

std::string list_literal(const std::vector<std::int64_t>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "; " : "") + std::to_string(xs[i]);
  return out + "]";
}

std::string two_add() {
  return "let l = ref 0 in\n"
         "l := !l + rand 3;\n"
         "l := !l + rand 3;\n"
         "!l\n";
}

std::string con_two_add() {
  return "let createcounter = fun _ -> ref 0 in\n"
         "let readcounter = fun l -> !l in\n"
         "let incrcounter = fun l -> faa l (rand 3) in\n"
         "let l = createcounter () in\n"
         "(incrcounter l ||| incrcounter l);\n"
         "readcounter l\n";
}

std::string con_two_add_taped(int impl) {
  return "(* counter, implementation " + std::to_string(impl) + " *)\n" + counter_module(impl) +
         "let c = createcounter () in\n"
         "((let lbl = createtape () in incrcounter c lbl)\n"
         "  ||| (let lbl = createtape () in incrcounter c lbl));\n"
         "readcounter c\n";
}

std::string two_incr(int impl) {
  return "(* counter, implementation " + std::to_string(impl) + " *)\n" + counter_module(impl) +
         "let c = createcounter () in\n"
         "let lbl = createtape () in\n"
         "incrcounter c lbl;\n"
         "let v1 = readcounter c in\n"
         "incrcounter c lbl;\n"
         "let v2 = readcounter c - v1 in\n"
         "4 * v1 + v2\n";
}

std::string hash_race() {
  return hash_module(2, true) +
         "let h = hash_init () in\n"
         "hash h 0 (alloctape 1) ||| hash h 0 (alloctape 1)\n";
}

std::string lazy_race() {
  return "let lazyrand_init = fun _ ->\n"
         "  let l = ref None in\n"
         "  let lo = newlock () in\n"
         "  (lo, l) in\n"
         "let lazyrandf = fun (lo, l) lbl tid ->\n"
         "  acquire lo;\n"
         "  let v = match !l with\n"
         "    | Some x -> x\n"
         "    | None -> let x = (rand lbl 1, tid) in l := Some x; x\n"
         "  end in\n"
         "  release lo; v in\n"
         "let lazyalloc = fun _ -> alloctape 1 in\n"
         "let r = lazyrand_init () in\n"
         "lazyrandf r (lazyalloc ()) 0 ||| lazyrandf r (lazyalloc ()) 1\n";
}

Fixture make(std::string name, std::string source, std::string predicate, Fixture::Expect expect, Rational value,
             std::size_t horizon, std::string summary) {
  Fixture f;
  f.name = std::move(name);
  f.source = std::move(source);
  f.predicate = std::move(predicate);
  f.expect = expect;
  f.value = std::move(value);
  f.horizon = horizon;
  f.uses_tapes = f.source.find("alloctape") != std::string::npos;
  f.summary = std::move(summary);
  return f;
}

std::vector<Fixture> build() {
  using E = Fixture::Expect;
  std::vector<Fixture> all;
  all.push_back(make("twoAdd", two_add(), "ret > 0", E::Bound, Rational(1, 16), 30,
                     "two sequential rand 3 increments; ret = 0 needs both draws 0"));
  all.push_back(make("conTwoAdd", con_two_add(), "ret > 0", E::Bound, Rational(1, 16), 80,
                     "the two increments in parallel through fetch-and-add"));
  for (int impl = 1; impl <= 3; ++impl) {
    std::string tag = "-I" + std::to_string(impl);
    Fixture f = make("conTwoAdd" + tag, con_two_add_taped(impl), "ret > 0", E::Bound, Rational(1, 16), 80,
                     "parallel increments with thread-local tapes, counter implementation " + std::to_string(impl));
    if (impl == 3) {
      f.decay = Rational(1, 5);
      f.horizon = 200;
    }
    all.push_back(std::move(f));
  }
  for (int impl = 1; impl <= 3; ++impl) {
    std::string tag = "-I" + std::to_string(impl);
    Fixture f = make("twoincr" + tag, two_incr(impl), "true", E::Uniform, Rational(0), 60,
                     "two increments on one tape, packed as 4 v1 + v2");
    f.uniform_top = 15;
    if (impl == 3) {
      f.decay = Rational(1, 5);
      f.horizon = 160;
    }
    all.push_back(std::move(f));
  }
  all.push_back(make("hashrace", hash_race(), "exists n in 0..1. ret == (n, n)", E::Bound, Rational(0), 120,
                     "two threads hash key 0; the second reads the cached value"));
  all.push_back(make("lazyrace", lazy_race(), "exists n in 0..1. ret == ((n, n), (n, n))", E::Bound, Rational(1, 2),
                     120, "lazy sampler shared by two threads tagging the writer's id"));
  {
    Fixture f = bloom_fixture(2, 1, {0, 1}, 2);
    all.push_back(std::move(f));
  }
  {
    Fixture f = bloom_fixture(8, 2, {0, 1}, 2);
    f.exact = false;
    all.push_back(std::move(f));
  }
  {
    Fixture f = hash_fixture(2, 3);
    all.push_back(std::move(f));
  }
  all.push_back(make("stuck_half", "(array 1 0).[rand 1]\n", "true", E::MinMass, Rational(1, 2), 3,
                     "reads index rand 1 of a one-cell array; index 1 is out of bounds"));
  all.push_back(make("stuck_half_if", "if rand 1 == 0 then 1 + true else 0\n", "true", E::MinMass, Rational(1, 2), 5,
                     "adds 1 to true on one branch"));
  return all;
}

}  // namespace

Fixture hash_fixture(std::int64_t keys, std::int64_t values) {
  if (keys < 1) throw std::invalid_argument("hash fixture needs at least one key");
  std::string src = hash_module(values, false) +
                    "let h = hash_init () in\n"
                    "let rec go k = if k < " +
                    std::to_string(keys) +
                    " then (let v = hash h k in v :: go (k + 1)) else [] in\n"
                    "let first = go 0 in\n"
                    "(first, go 0)\n";
  Fixture f = make("hash-" + std::to_string(keys) + "-" + std::to_string(values), src, "fst ret == snd ret",
                   Fixture::Expect::Bound, Rational(0), 200, "hashes every key twice; repeated keys agree");
  return f;
}

Fixture bloom_fixture(std::int64_t size, std::int64_t hashes, const std::vector<std::int64_t>& xs, std::int64_t y) {
  if (size < 1 || hashes < 1) throw std::invalid_argument("bloom filter needs size >= 1 and hashes >= 1");
  std::string src = hash_module(size, false) +
                    "let new_hash = fun _ -> let st = hash_init () in fun x -> hash st x in\n"
                    "let bfinit = fun _ ->\n"
                    "  let hfs = list_init " +
                    std::to_string(hashes) +
                    " (fun _ -> new_hash ()) in\n"
                    "  let arr = array_init " +
                    std::to_string(size) +
                    " false in\n"
                    "  (hfs, arr) in\n"
                    "let bfinsert = fun bfl x ->\n"
                    "  let (hfs, arr) = bfl in\n"
                    "  list_iter (fun h -> let i = h x in arr.[i] := true) hfs in\n"
                    "let bflookup = fun bfl y ->\n"
                    "  let (hfs, arr) = bfl in\n"
                    "  let res = ref true in\n"
                    "  list_iter (fun h -> let i = h y in res := !res && arr.[i]) hfs;\n"
                    "  !res in\n"
                    "let bfmain = fun xs y ->\n"
                    "  let bfl = bfinit () in\n"
                    "  (rec f zs = match zs with\n"
                    "    | [] -> ()\n"
                    "    | z :: zs' -> (bfinsert bfl z ||| f zs')\n"
                    "  end) xs;\n"
                    "  bflookup bfl y in\n"
                    "bfmain " +
                    list_literal(xs) + " " + std::to_string(y) + "\n";
  const auto n = static_cast<std::int64_t>(xs.size());
  Fixture f = make("bloom-" + std::to_string(size) + "-" + std::to_string(hashes), src, "ret == false",
                   Fixture::Expect::Bound, efp(hashes * n, 0, size, hashes), 400,
                   "parallel insertion of " + list_literal(xs) + ", then lookup of " + std::to_string(y));
  return f;
}

std::string fixture_file_text(const Fixture& f) {
  std::string expect;
  switch (f.expect) {
    case Fixture::Expect::Bound: expect = "sup_violation <= " + to_string(f.value); break;
    case Fixture::Expect::Uniform: expect = "uniform over 0.." + std::to_string(f.uniform_top); break;
    case Fixture::Expect::MinMass: expect = "min_mass = " + to_string(f.value); break;
  }
  return "(* " + f.name + ": " + f.summary + " *)\n" + "(* predicate: " + f.predicate + "; expect: " + expect +
         "; horizon: " + std::to_string(f.horizon) + " *)\n" + f.source;
}

const std::vector<Fixture>& catalogue() {
  static const std::vector<Fixture> all = build();
  return all;
}

const Fixture& fixture(std::string_view name) {
  const std::string key = normalize_fixture_name(name);
  for (const auto& f : catalogue()) {
    if (normalize_fixture_name(f.name) == key) return f;
  }
  throw UnknownFixture(std::string(name));
}

}  // namespace probsched
