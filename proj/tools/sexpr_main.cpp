// sexpr parse <file> [--engine naive|dps] [--print]

#include <fstream>
#include <iostream>
#include <iterator>
#include <string>

#include <CLI11.hpp>

#include "dps/sexpr.hpp"

int main(int argc, char** argv) {
    CLI::App app{"S-expression parser"};
    app.require_subcommand(1);
    CLI::App* parse = app.add_subcommand("parse", "parse the first expression of a file");

    std::string path;
    std::string engine = "dps";
    bool print = false;
    parse->add_option("file", path, "input file")->required();
    parse->add_option("--engine", engine, "naive or dps")->check(CLI::IsMember({"naive", "dps"}));
    parse->add_flag("--print", print, "print the canonical form");

    CLI11_PARSE(app, argc, argv);

    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot read " << path << '\n';
        return 2;
    }
    const std::string input{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};

    const dps::ParseResult r = engine == "naive" ? dps::parse_naive(input) : dps::parse_dps(input);
    if (const auto* err = std::get_if<dps::ParseError>(&r)) {
        std::cout << "error: " << dps::to_string(err->kind) << " at " << err->pos << '\n';
        return 1;
    }
    if (print) std::cout << dps::print_sexpr(std::get<dps::SExpr>(r)) << '\n';
    return 0;
}
