#include <sstream>

#include "remedy/printkit.hpp"

namespace remedy {

namespace {

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

struct Edit {
  char tag;  // ' ', '-', '+'
  size_t a, b;  // line indices (a into old, b into new) at this point
};

// Longest-common-subsequence edit script; deletions before insertions.
std::vector<Edit> edit_script(const std::vector<std::string>& x, const std::vector<std::string>& y) {
  const size_t n = x.size(), m = y.size();
  std::vector<std::vector<size_t>> lcs(n + 1, std::vector<size_t>(m + 1, 0));
  for (size_t i = n; i-- > 0;)
    for (size_t j = m; j-- > 0;)
      lcs[i][j] = x[i] == y[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
  std::vector<Edit> out;
  size_t i = 0, j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && x[i] == y[j]) {
      out.push_back({' ', i++, j++});
    } else if (i < n && (j == m || lcs[i + 1][j] >= lcs[i][j + 1])) {
      out.push_back({'-', i++, j});
    } else {
      out.push_back({'+', i, j++});
    }
  }
  return out;
}

std::string range(size_t start, size_t count) {
  // GNU convention: an empty range names the line before it.
  size_t first = count == 0 ? start : start + 1;
  if (count == 1) return std::to_string(first);
  return std::to_string(first) + "," + std::to_string(count);
}

}  // namespace

std::string text_diff(const std::string& a, const std::string& b, const std::string& a_label,
                      const std::string& b_label) {
  constexpr size_t kContext = 3;
  auto x = split_lines(a), y = split_lines(b);
  auto edits = edit_script(x, y);
  std::string body;
  size_t k = 0;
  while (k < edits.size()) {
    while (k < edits.size() && edits[k].tag == ' ') ++k;
    if (k == edits.size()) break;
    size_t start = k >= kContext ? k - kContext : 0;
    size_t end = k;
    // Extend while the next change is close enough to share context.
    while (true) {
      while (end < edits.size() && edits[end].tag != ' ') ++end;
      size_t run = end;
      while (run < edits.size() && edits[run].tag == ' ') ++run;
      if (run < edits.size() && run - end <= 2 * kContext) {
        end = run;
        continue;
      }
      end = std::min(edits.size(), end + kContext);
      break;
    }
    size_t a_count = 0, b_count = 0;
    for (size_t e = start; e < end; ++e) {
      if (edits[e].tag != '+') ++a_count;
      if (edits[e].tag != '-') ++b_count;
    }
    body += "@@ -" + range(edits[start].a, a_count) + " +" + range(edits[start].b, b_count) + " @@\n";
    for (size_t e = start; e < end; ++e) {
      const std::string& line = edits[e].tag == '+' ? y[edits[e].b] : x[edits[e].a];
      body += edits[e].tag + line + "\n";
    }
    k = end;
  }
  if (body.empty()) return "```diff\n```\n";
  return "```diff\n--- " + a_label + "\n+++ " + b_label + "\n" + body + "```\n";
}

std::string pipeline_diff(const PlannedPipeline& a, const PlannedPipeline& b) {
  return text_diff(pretty_print(a).text, pretty_print(b).text);
}

}  // namespace remedy
