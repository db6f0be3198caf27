#include "stabtrace/script.hpp"

#include <sstream>

namespace stabtrace {

namespace {

std::vector<DartId> parse_dartlist(const std::string& text, int line) {
  std::vector<DartId> out;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',') {
      if (cur.empty())
        throw Error(ErrorKind::syntax_error,
                    "line " + std::to_string(line) + ": empty dart id");
      try {
        out.push_back(std::stoi(cur));
      } catch (...) {
        throw Error(ErrorKind::syntax_error,
                    "line " + std::to_string(line) + ": bad dart id " + cur);
      }
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (out.empty())
    throw Error(ErrorKind::syntax_error,
                "line " + std::to_string(line) + ": empty dart list");
  return out;
}

// key=value token split
std::pair<std::string, std::string> split_kv(const std::string& tok,
                                             int line) {
  auto eq = tok.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= tok.size())
    throw Error(ErrorKind::syntax_error,
                "line " + std::to_string(line) + ": expected key=value, got " +
                    tok);
  return {tok.substr(0, eq), tok.substr(eq + 1)};
}

}  // namespace

HomotopyScript parse_script(const std::string& text) {
  HomotopyScript s;
  bool saw_genus = false, saw_bound = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "genus") {
      if (saw_genus)
        throw Error(ErrorKind::syntax_error,
                    "line " + std::to_string(lineno) + ": duplicate genus");
      if (!(ls >> s.genus) || s.genus < 0)
        throw Error(ErrorKind::syntax_error,
                    "line " + std::to_string(lineno) + ": bad genus");
      saw_genus = true;
    } else if (kw == "bound") {
      if (saw_bound)
        throw Error(ErrorKind::syntax_error,
                    "line " + std::to_string(lineno) + ": duplicate bound");
      if (!(ls >> s.bound) || s.bound < 0)
        throw Error(ErrorKind::syntax_error,
                    "line " + std::to_string(lineno) + ": bad bound");
      saw_bound = true;
    } else if (kw == "isotopy") {
      HomotopyEvent e;
      e.kind = HomotopyEvent::Kind::isotopy;
      e.line = lineno;
      if (!(ls >> e.label))
        throw Error(ErrorKind::syntax_error,
                    "line " + std::to_string(lineno) + ": isotopy label");
      s.events.push_back(std::move(e));
    } else if (kw == "finger") {
      HomotopyEvent e;
      e.kind = HomotopyEvent::Kind::finger;
      e.line = lineno;
      std::string tok;
      bool a = false, b = false, p = false;
      while (ls >> tok) {
        auto [k, v] = split_kv(tok, lineno);
        if (k == "alpha") {
          e.alpha = parse_dartlist(v, lineno);
          a = true;
        } else if (k == "beta") {
          e.beta = parse_dartlist(v, lineno);
          b = true;
        } else if (k == "pair") {
          e.pair_index = std::stoi(v);
          p = true;
        } else {
          throw Error(ErrorKind::syntax_error,
                      "line " + std::to_string(lineno) + ": unknown key " + k);
        }
      }
      if (!a || !b || !p)
        throw Error(ErrorKind::syntax_error,
                    "line " + std::to_string(lineno) +
                        ": finger needs alpha=, beta=, pair=");
      s.events.push_back(std::move(e));
    } else if (kw == "whitney") {
      HomotopyEvent e;
      e.kind = HomotopyEvent::Kind::whitney;
      e.line = lineno;
      std::string tok;
      bool a = false, b = false;
      while (ls >> tok) {
        auto [k, v] = split_kv(tok, lineno);
        if (k == "arc1") {
          e.alpha = parse_dartlist(v, lineno);
          a = true;
        } else if (k == "arc2") {
          e.beta = parse_dartlist(v, lineno);
          b = true;
        } else {
          throw Error(ErrorKind::syntax_error,
                      "line " + std::to_string(lineno) + ": unknown key " + k);
        }
      }
      if (!a || !b)
        throw Error(ErrorKind::syntax_error,
                    "line " + std::to_string(lineno) +
                        ": whitney needs arc1=, arc2=");
      s.events.push_back(std::move(e));
    } else {
      throw Error(ErrorKind::syntax_error,
                  "line " + std::to_string(lineno) + ": unknown record " + kw);
    }
  }
  return s;
}

std::string write_script(const HomotopyScript& s) {
  std::ostringstream out;
  out << "genus " << s.genus << "\n";
  out << "bound " << s.bound << "\n";
  auto dl = [](const std::vector<DartId>& ds) {
    std::string t;
    for (size_t i = 0; i < ds.size(); ++i) {
      if (i) t += ",";
      t += std::to_string(ds[i]);
    }
    return t;
  };
  for (const auto& e : s.events) {
    switch (e.kind) {
      case HomotopyEvent::Kind::isotopy:
        out << "isotopy " << e.label << "\n";
        break;
      case HomotopyEvent::Kind::finger:
        out << "finger alpha=" << dl(e.alpha) << " beta=" << dl(e.beta)
            << " pair=" << e.pair_index << "\n";
        break;
      case HomotopyEvent::Kind::whitney:
        out << "whitney arc1=" << dl(e.alpha) << " arc2=" << dl(e.beta)
            << "\n";
        break;
    }
  }
  return out.str();
}

}  // namespace stabtrace
