#include "stathyp/profile_io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "stathyp/errors.hpp"

namespace stathyp {

namespace {

double parse_number(const std::string& token, int line) {
  if (token == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ParameterError("profile line " + std::to_string(line) + ": '" + token + "' is not a number");
  }
}

}  // namespace

ProjectionProfile read_profile(std::istream& in) {
  ProjectionProfile p;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream ls(raw);
    std::string kind;
    if (!(ls >> kind) || kind.front() == '#') continue;
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    auto need = [&](std::size_t n) {
      if (tok.size() != n)
        throw ParameterError("profile line " + std::to_string(line) + ": '" + kind + "' expects " +
                             std::to_string(n) + " fields");
    };
    if (kind == "top") {
      need(1);
      p.top_level = parse_number(tok[0], line);
    } else if (kind == "nonannular") {
      need(2);
      ProfileEntry e;
      e.label = tok[0];
      e.value = parse_number(tok[1], line);
      p.entries.push_back(e);
    } else if (kind == "annular" || kind == "annular-log") {
      need(4);
      ProfileEntry e;
      e.label = tok[0];
      e.kind = ProfileEntry::Kind::annular;
      const double a = parse_number(tok[1], line), b = parse_number(tok[2], line), c = parse_number(tok[3], line);
      try {
        e.annulus = kind == "annular" ? HoroballPair(a, b, c) : HoroballPair::from_logs(a, b, c);
      } catch (const DomainError& err) {
        throw ParameterError("profile line " + std::to_string(line) + ": " + err.what());
      }
      p.entries.push_back(e);
    } else {
      throw ParameterError("profile line " + std::to_string(line) + ": unknown record '" + kind + "'");
    }
  }
  validate(p);
  return p;
}

ProjectionProfile read_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open profile file '" + path + "'");
  return read_profile(in);
}

void write_profile(std::ostream& out, const ProjectionProfile& profile) {
  out << std::setprecision(17);
  out << "top " << profile.top_level << '\n';
  for (const auto& e : profile.entries) {
    if (e.kind == ProfileEntry::Kind::non_annular) {
      out << "nonannular " << e.label << ' ' << e.value << '\n';
    } else {
      out << "annular-log " << e.label << ' ' << e.annulus.log_inv_length_x() << ' '
          << e.annulus.log_inv_length_y() << ' ' << e.annulus.log_twist() << '\n';
    }
  }
}

}  // namespace stathyp
