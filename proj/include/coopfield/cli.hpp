#ifndef COOPFIELD_CLI_HPP
#define COOPFIELD_CLI_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace coopfield {

// Subcommand plus the merged key=value map (config file first, command line
// overrides). Unknown keys and duplicate keys are hard errors.
struct CliArgs {
    std::string subcommand;
    std::vector<std::string> positionals;
    std::map<std::string, std::string> values;

    const std::string* find(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_real(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
};

CliArgs parse_config(const std::vector<std::string>& argv);

std::string usage_text();

// Dispatches a full command line; returns the process exit status
// (0 success, 2 usage/config error, 3 I/O error, 4 numerical-validity error).
int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace coopfield

#endif
