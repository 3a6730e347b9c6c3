#include "qlink/cli/app.hpp"

int main(int argc, char** argv) { return qlink::cli::run_app(argc, argv); }
