namespace tx {}
