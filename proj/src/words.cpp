#include "relconj/words.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace relconj {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::unknown_symbol: return "UnknownSymbol";
    case Errc::malformed_token: return "MalformedToken";
    case Errc::alphabet_mismatch: return "AlphabetMismatch";
    case Errc::handle_mismatch: return "HandleMismatch";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::factor_mismatch: return "FactorMismatch";
    case Errc::unsupported_backend: return "UnsupportedBackend";
    case Errc::resource_limit: return "ResourceLimit";
    case Errc::missing_constant: return "MissingConstant";
    case Errc::degenerate_profile: return "DegenerateProfile";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::inconsistent_duplicates: return "InconsistentDuplicates";
    case Errc::not_a_conjugator: return "NotAConjugator";
    case Errc::oracle_failure: return "OracleFailure";
    case Errc::oracle_unavailable: return "OracleUnavailable";
    case Errc::bad_file: return "BadFile";
  }
  return "Error";
}

namespace {

constexpr std::string_view kInverseSuffix = "^-1";

bool has_whitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

std::shared_ptr<const Alphabet> Alphabet::make(
    const std::vector<std::string>& generators,
    const std::vector<std::string>& involutions) {
  auto alphabet = std::shared_ptr<Alphabet>(new Alphabet());
  for (const auto& inv : involutions) {
    if (std::find(generators.begin(), generators.end(), inv) ==
        generators.end()) {
      fail(Errc::bad_file, "involution '" + inv + "' is not a generator");
    }
  }
  for (const auto& gen : generators) {
    if (gen.empty() || has_whitespace(gen) ||
        gen.find(kInverseSuffix) != std::string::npos) {
      fail(Errc::bad_file, "invalid generator name '" + gen + "'");
    }
    bool self_inverse = std::find(involutions.begin(), involutions.end(),
                                  gen) != involutions.end();
    int idx = static_cast<int>(alphabet->names_.size());
    if (alphabet->index_.count(gen) != 0) {
      fail(Errc::bad_file, "duplicate generator name '" + gen + "'");
    }
    alphabet->names_.push_back(gen);
    alphabet->index_.emplace(gen, idx);
    if (self_inverse) {
      alphabet->inverse_.push_back(idx);
    } else {
      std::string inv_name = gen + std::string(kInverseSuffix);
      alphabet->names_.push_back(inv_name);
      alphabet->index_.emplace(inv_name, idx + 1);
      alphabet->inverse_.push_back(idx + 1);
      alphabet->inverse_.push_back(idx);
    }
  }
  return alphabet;
}

std::optional<int> Alphabet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Alphabet::operator==(const Alphabet& other) const {
  return names_ == other.names_ && inverse_ == other.inverse_;
}

Word::Word(AlphabetRef alphabet, std::vector<std::int32_t> letters)
    : alphabet_(std::move(alphabet)), letters_(std::move(letters)) {
  if (!alphabet_) fail(Errc::alphabet_mismatch, "word without alphabet");
  for (auto l : letters_) {
    if (l < 0 || l >= alphabet_->size()) {
      fail(Errc::index_out_of_range,
           "letter index " + std::to_string(l) + " out of range");
    }
  }
}

bool Word::operator==(const Word& other) const {
  if (letters_ != other.letters_) return false;
  if (alphabet_ == other.alphabet_) return true;
  if (!alphabet_ || !other.alphabet_) return alphabet_ == other.alphabet_;
  return *alphabet_ == *other.alphabet_;
}

bool Word::lex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.letters_.begin(), a.letters_.end(),
                                      b.letters_.begin(), b.letters_.end());
}

Word parse_word(std::string_view text, AlphabetRef alphabet) {
  if (!alphabet) fail(Errc::alphabet_mismatch, "null alphabet");
  std::vector<std::int32_t> letters;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    if (auto direct = alphabet->find(token)) {
      letters.push_back(*direct);
      continue;
    }
    if (token.size() > kInverseSuffix.size() &&
        token.ends_with(kInverseSuffix)) {
      std::string base = token.substr(0, token.size() - kInverseSuffix.size());
      if (auto sym = alphabet->find(base)) {
        letters.push_back(alphabet->inverse(*sym));
        continue;
      }
      fail(Errc::unknown_symbol, "'" + token + "'");
    }
    if (token == kInverseSuffix) {
      fail(Errc::malformed_token, "'" + token + "'");
    }
    fail(Errc::unknown_symbol, "'" + token + "'");
  }
  return Word(std::move(alphabet), std::move(letters));
}

std::string print_word(const Word& w) {
  std::string out;
  for (auto l : w.letters()) {
    if (!out.empty()) out += ' ';
    out += w.alphabet()->name(l);
  }
  return out;
}

Word free_reduce(const Word& w) {
  const Alphabet& a = *w.alphabet();
  std::vector<std::int32_t> stack;
  stack.reserve(w.size());
  for (auto l : w.letters()) {
    if (!stack.empty() && a.inverse(stack.back()) == l) {
      stack.pop_back();
    } else {
      stack.push_back(l);
    }
  }
  return Word(w.alphabet(), std::move(stack));
}

Word invert(const Word& w) {
  const Alphabet& a = *w.alphabet();
  std::vector<std::int32_t> letters(w.letters().rbegin(), w.letters().rend());
  for (auto& l : letters) l = a.inverse(l);
  return Word(w.alphabet(), std::move(letters));
}

void check_same_alphabet(const Word& u, const Word& v) {
  if (u.alphabet() == v.alphabet()) return;
  if (u.alphabet() && v.alphabet() && *u.alphabet() == *v.alphabet()) return;
  fail(Errc::alphabet_mismatch, "words over different alphabets");
}

Word concat_reduce(const Word& u, const Word& v) {
  check_same_alphabet(u, v);
  std::vector<std::int32_t> letters(u.letters().begin(), u.letters().end());
  letters.insert(letters.end(), v.letters().begin(), v.letters().end());
  return free_reduce(Word(u.alphabet(), std::move(letters)));
}

std::pair<Word, Word> cyclic_reduce(const Word& w) {
  Word reduced = free_reduce(w);
  const Alphabet& a = *reduced.alphabet();
  auto letters = reduced.letters();
  std::size_t lo = 0, hi = letters.size();
  std::vector<std::int32_t> conj;
  while (hi - lo >= 2 && a.inverse(letters[lo]) == letters[hi - 1]) {
    conj.push_back(letters[lo]);
    ++lo;
    --hi;
  }
  std::vector<std::int32_t> core(
      letters.begin() + static_cast<std::ptrdiff_t>(lo),
      letters.begin() + static_cast<std::ptrdiff_t>(hi));
  return {Word(reduced.alphabet(), std::move(core)),
          Word(reduced.alphabet(), std::move(conj))};
}

}  // namespace relconj
