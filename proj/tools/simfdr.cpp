#include "simfdr/cli.hpp"

int main(int argc, char** argv) {
    return simfdr::run_cli(argc, argv);
}
