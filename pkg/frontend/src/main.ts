import { ApiClient } from "./api.js";
import { GameController } from "./ui.js";

const root = document.getElementById("app");
if (root instanceof HTMLElement) {
  new GameController(root, new ApiClient("")).init();
}
