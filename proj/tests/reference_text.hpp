#pragma once

#include <string>
#include <vector>

// English reference text for data instance 97, one
// entry per statement. The last statement ends in "..." in the reference, a
// truncation mark; the rendered text ends in ".".
inline const std::vector<std::string> kRecord97English = {
    "Chicago Bulls vs. Denver Nuggets",
    "The match between the Chicago Bulls and the Denver Nuggets took place on Thursday (January 1, 2015) at the "
    "sold-out United Center (Illinois).",
    "Over 20000 enthusiastic fans came to Chicago on the 1st gameday of the 2015 season, completely filling the "
    "stadium.",
    "The home team won with 106 - 101 against the visiting team from Denver.",
    "The best player of the game was undoubtedly Jimmy Butler of the Chicago Bulls. He led the team to victory with "
    "26 points, 8 impressive rebounds, 8 precise assists, 2 crucial steals, and 1 spectacular block.",
    "On the contrary, the Denver Nuggets were unable to secure a win despite the impressive performances of their "
    "top player. Wilson Chandler was the leading scorer on the team with 22 points.",
};
