namespace diamondlab {}
