#include <iostream>

#include "biotfs/verify.hpp"

int main() { return biotfs::run_acceptance(std::cout) ? 0 : 1; }
